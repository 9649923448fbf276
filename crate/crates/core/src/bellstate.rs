//! Bell-diagonal two-qubit state algebra.
//!
//! States are probability mixtures of the four Bell states
//!
//! ```text
//! psi+- = (|01> +- |10>) / sqrt(2),   phi+- = (|00> +- |11>) / sqrt(2)
//! ```
//!
//! stored as a weight vector indexed by a Klein four-group label
//! `(bit flip, phase flip)`:
//!
//! | index | state | label  |
//! |-------|-------|--------|
//! | 0     | psi+  | (0, 0) |
//! | 1     | psi-  | (0, 1) |
//! | 2     | phi+  | (1, 0) |
//! | 3     | phi-  | (1, 1) |
//!
//! `psi+` is the group identity, matching the convention that a successful
//! entangling attempt prepares `psi+` and that fidelity means the `psi+`
//! weight. Applying a Pauli to one qubit of a Bell state XORs its label, so
//! entanglement swapping with the standard Pauli feed-forward correction is
//! exactly the XOR convolution of two weight vectors ([`BellDiagonalState::swap`]),
//! with `psi+ (x) psi+ -> psi+`. The [`oracle`] submodule re-derives the same
//! operation from dense four-qubit density matrices and is used by the tests
//! to pin this algebra down.
//!
//! Memory dephasing with per-qubit phase-flip noise mixes `psi+ <-> psi-`
//! and `phi+ <-> phi-` pairwise; two qubits stored for time `t` keep the
//! majority component with probability `p(t) = (1 + exp(-t/tau_c)) / 2`.

pub mod oracle;

use crate::error::{ensure, Result};
use crate::math;
use crate::measures;

/// Tolerance on weight-vector normalization and on negative rounding dust.
const WEIGHT_TOL: f64 = 1e-12;

/// A two-qubit state diagonal in the Bell basis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BellDiagonalState {
    /// Weights over `[psi+, psi-, phi+, phi-]`.
    weights: [f64; 4],
}

impl BellDiagonalState {
    /// Builds a state from the four Bell weights.
    ///
    /// Weights must be non-negative (values above `-1e-12` are clamped to
    /// zero as rounding dust) and sum to one within `1e-12`. The vector is
    /// stored as given, never renormalized.
    pub fn new(w_psi_plus: f64, w_psi_minus: f64, w_phi_plus: f64, w_phi_minus: f64) -> Result<Self> {
        Self::from_weights([w_psi_plus, w_psi_minus, w_phi_plus, w_phi_minus])
    }

    /// Builds a state from a weight array ordered `[psi+, psi-, phi+, phi-]`.
    pub fn from_weights(mut weights: [f64; 4]) -> Result<Self> {
        for w in &mut weights {
            ensure!(
                w.is_finite() && *w >= -WEIGHT_TOL,
                "Bell weights must be non-negative, got {w}"
            );
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        ensure!(
            math::abs(sum - 1.0) <= WEIGHT_TOL,
            "Bell weights must sum to 1 within {WEIGHT_TOL}, got {sum}"
        );
        Ok(BellDiagonalState { weights })
    }

    /// The maximally entangled state `psi+`.
    pub fn psi_plus() -> Self {
        BellDiagonalState {
            weights: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Weight vector ordered `[psi+, psi-, phi+, phi-]`.
    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }

    /// `psi+` weight.
    pub fn w_psi_plus(&self) -> f64 {
        self.weights[0]
    }

    /// `psi-` weight.
    pub fn w_psi_minus(&self) -> f64 {
        self.weights[1]
    }

    /// `phi+` weight.
    pub fn w_phi_plus(&self) -> f64 {
        self.weights[2]
    }

    /// `phi-` weight.
    pub fn w_phi_minus(&self) -> f64 {
        self.weights[3]
    }

    /// Fidelity with respect to `psi+`.
    pub fn fidelity(&self) -> f64 {
        self.weights[0]
    }

    /// State after both qubits dephased for `t` seconds with coherence time
    /// `tau_c`.
    ///
    /// Mixes each flip pair with weight `p(t) = (1 + exp(-t/tau_c)) / 2`:
    /// the new `psi+` weight is `p(t) w_psi+ + (1 - p(t)) w_psi-`, and
    /// symmetrically for the partner and for the `phi` pair. Composing two
    /// dephasing steps of `t1` and `t2` equals one step of `t1 + t2`.
    pub fn dephase(&self, t: f64, tau_c: f64) -> Result<Self> {
        let p = measures::fidelity_after(t, tau_c)?;
        let w = self.weights;
        Ok(BellDiagonalState {
            weights: [
                p * w[0] + (1.0 - p) * w[1],
                p * w[1] + (1.0 - p) * w[0],
                p * w[2] + (1.0 - p) * w[3],
                p * w[3] + (1.0 - p) * w[2],
            ],
        })
    }

    /// State of the outer pair after an ideal Bell-state measurement connects
    /// `self` and `other`, with the outcome-dependent Pauli correction
    /// applied so that `psi+ (x) psi+ -> psi+`.
    ///
    /// With the label convention of this module that is the XOR convolution
    /// of the two weight vectors. `psi+` is the identity element and the
    /// operation is commutative and associative.
    pub fn swap(&self, other: &Self) -> Self {
        let mut out = [0.0; 4];
        for (i, wi) in self.weights.iter().enumerate() {
            for (j, wj) in other.weights.iter().enumerate() {
                out[i ^ j] += wi * wj;
            }
        }
        BellDiagonalState { weights: out }
    }
}

/// Upper bound on the fidelity reachable by a purify-then-wait round.
///
/// A purification round that ends with fidelity `f_pur` still has to wait
/// one classical exchange of duration `t` before the result is usable, so
/// the delivered fidelity is at most
///
/// ```text
/// p(t) * f_pur + (1 - p(t)) * (1 - f_pur)  <=  p(t)
/// ```
///
/// with equality at `f_pur = 1`.
pub fn purification_fidelity_cap(f_pur: f64, t: f64, tau_c: f64) -> Result<f64> {
    ensure!(
        (0.0..=1.0).contains(&f_pur),
        "purified fidelity must lie in [0, 1], got {f_pur}"
    );
    let p = measures::fidelity_after(t, tau_c)?;
    Ok(p * f_pur + (1.0 - p) * (1.0 - f_pur))
}
