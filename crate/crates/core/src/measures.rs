//! Entanglement measures of the decayed Bell states.
//!
//! A stored pair decays to a rank-two Bell-diagonal state with fidelity
//! `p(t) = (1 + exp(-t/tau_c)) / 2`. For that family the relevant measures
//! have closed forms in the binary entropy `H`:
//!
//! * entanglement cost `E_C = H(1/2 + sqrt(p(1-p)))`,
//! * distillable entanglement `E_D = 1 - H(p)`, which is also the asymptotic
//!   yield of the one-way hashing protocol.
//!
//! `E_D <= E_C` always, both are monotone in the fidelity, and for
//! `t >> tau_c` they fall off as `t * exp(-2t/tau_c)` and `exp(-2t/tau_c)`
//! respectively.

use crate::error::{ensure, Result};
use crate::math;

/// Which entanglement measure converts fidelity into ebits per pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MeasureKind {
    /// Entanglement cost `E_C`.
    EntanglementCost,
    /// Distillable entanglement `E_D` (one-way hashing yield).
    DistillableEntanglement,
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2(1-p)` in bits, with the
/// convention `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    ensure!(
        (0.0..=1.0).contains(&p),
        "entropy argument must lie in [0, 1], got {p}"
    );
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * math::log2(p) - (1.0 - p) * math::log2(1.0 - p))
}

/// Fidelity `p(t) = (1 + exp(-t/tau_c)) / 2` of a stored pair after both
/// qubits dephased for `t` seconds.
pub fn fidelity_after(t: f64, tau_c: f64) -> Result<f64> {
    ensure!(t.is_finite() && t >= 0.0, "decay time must be >= 0, got {t}");
    ensure!(
        tau_c.is_finite() && tau_c > 0.0,
        "coherence time must be positive, got {tau_c}"
    );
    Ok((1.0 + math::exp(-t / tau_c)) / 2.0)
}

/// Entanglement cost `E_C = H(1/2 + sqrt(f (1 - f)))` of the rank-two state
/// with majority weight `f in [1/2, 1]`.
///
/// Callers holding a state with fidelity below 1/2 must relabel the majority
/// Bell component first; such inputs are rejected.
///
/// Evaluated through the exact rewrite `H(1 - u)` with
/// `u = (f - 1/2)^2 / (1/2 + sqrt(f (1 - f)))`; the naive entropy argument
/// rounds to 1 once `f - 1/2` drops below about `1e-8` and would return 0
/// deep in the decayed tail where `E_C` is tiny but nonzero.
pub fn entanglement_cost(f: f64) -> Result<f64> {
    ensure!(
        (0.5..=1.0).contains(&f),
        "fidelity must lie in [1/2, 1], got {f}"
    );
    let delta = f - 0.5;
    let u = delta * delta / (0.5 + math::sqrt(f * (1.0 - f)));
    if u == 0.0 {
        return Ok(0.0);
    }
    Ok((-(1.0 - u) * math::ln_1p(-u) - u * math::ln(u)) / core::f64::consts::LN_2)
}

/// Distillable entanglement `E_D = max(0, 1 - H(f))` for `f in [1/2, 1]`.
///
/// The value is non-negative on the whole domain; the clamp only guards
/// rounding right at `f = 1/2`. Like [`entanglement_cost`] this uses a
/// cancellation-free rewrite,
/// `1 - H(1/2 + d) = [(1/2 + d) ln(1 + 2d) + (1/2 - d) ln(1 - 2d)] / ln 2`,
/// which stays accurate where `1 - H(f)` underflows against 1.
pub fn distillable_entanglement(f: f64) -> Result<f64> {
    ensure!(
        (0.5..=1.0).contains(&f),
        "fidelity must lie in [1/2, 1], got {f}"
    );
    if f == 1.0 {
        return Ok(1.0);
    }
    let delta = f - 0.5;
    let yield_bits = ((0.5 + delta) * math::ln_1p(2.0 * delta)
        + (0.5 - delta) * math::ln_1p(-2.0 * delta))
        / core::f64::consts::LN_2;
    Ok(yield_bits.max(0.0))
}

/// Evaluates the chosen measure at fidelity `f`.
pub fn measure_value(kind: MeasureKind, f: f64) -> Result<f64> {
    match kind {
        MeasureKind::EntanglementCost => entanglement_cost(f),
        MeasureKind::DistillableEntanglement => distillable_entanglement(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::abs;

    #[test]
    fn entropy_endpoints_exact() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    }

    #[test]
    fn entropy_reference_value() {
        // H(0.75), independently evaluated at high precision.
        let h = binary_entropy(0.75).unwrap();
        assert!(abs(h - 0.8112781244591328) < 1e-12, "h = {h}");
    }

    #[test]
    fn entropy_domain() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn fidelity_limits() {
        assert_eq!(fidelity_after(0.0, 1.0).unwrap(), 1.0);
        // Fully dephased limit.
        assert_eq!(fidelity_after(1e9, 1.0).unwrap(), 0.5);
        // One coherence time.
        let p = fidelity_after(2.0, 2.0).unwrap();
        assert!(abs(p - 0.6839397205857212) < 1e-12, "p = {p}");
        assert!(fidelity_after(-1.0, 1.0).is_err());
        assert!(fidelity_after(1.0, 0.0).is_err());
    }

    #[test]
    fn cost_endpoints_exact() {
        assert_eq!(entanglement_cost(1.0).unwrap(), 1.0);
        assert_eq!(entanglement_cost(0.5).unwrap(), 0.0);
    }

    #[test]
    fn cost_reference_value() {
        // E_C(0.75) = H(0.5 + sqrt(3)/4) = H(0.9330127018922193).
        let ec = entanglement_cost(0.75).unwrap();
        assert!(abs(ec - 0.35457890266526988) < 1e-12, "ec = {ec}");
    }

    #[test]
    fn distillable_endpoints_and_value() {
        assert_eq!(distillable_entanglement(1.0).unwrap(), 1.0);
        assert_eq!(distillable_entanglement(0.5).unwrap(), 0.0);
        let ed = distillable_entanglement(0.75).unwrap();
        assert!(abs(ed - 0.18872187554086714) < 1e-12, "ed = {ed}");
    }

    #[test]
    fn measures_reject_relabel_domain() {
        assert!(entanglement_cost(0.49).is_err());
        assert!(distillable_entanglement(0.49).is_err());
        assert!(entanglement_cost(1.01).is_err());
    }

    #[test]
    fn distillable_never_exceeds_cost() {
        for i in 0..=10_000 {
            let f = 0.5 + 0.5 * i as f64 / 10_000.0;
            let ec = entanglement_cost(f).unwrap();
            let ed = distillable_entanglement(f).unwrap();
            assert!(ed <= ec + 1e-15, "E_D > E_C at f = {f}");
        }
    }

    #[test]
    fn both_measures_monotone_in_fidelity() {
        let mut prev_ec = -1.0;
        let mut prev_ed = -1.0;
        for i in 0..=1000 {
            let f = 0.5 + 0.5 * i as f64 / 1000.0;
            let ec = entanglement_cost(f).unwrap();
            let ed = distillable_entanglement(f).unwrap();
            assert!(ec >= prev_ec && ed >= prev_ed, "not monotone at f = {f}");
            prev_ec = ec;
            prev_ed = ed;
        }
    }

    #[test]
    fn asymptotic_falloff_ratios_stabilize() {
        // For t >> tau_c the measures behave as
        //   E_C(p(t)) ~ t exp(-2t/tau_c),  E_D(p(t)) ~ exp(-2t/tau_c),
        // so the corresponding ratios approach constants. Sample the window
        // [10, 30] tau_c and require the spread around the midpoint value to
        // stay below 5%.
        let tau = 1.0;
        let mut ec_ratios = alloc::vec::Vec::new();
        let mut ed_ratios = alloc::vec::Vec::new();
        for k in 0..=20 {
            let t = 10.0 + k as f64;
            let f = fidelity_after(t, tau).unwrap();
            let envelope = crate::math::exp(-2.0 * t / tau);
            ec_ratios.push(entanglement_cost(f).unwrap() / (t * envelope));
            ed_ratios.push(distillable_entanglement(f).unwrap() / envelope);
        }
        for ratios in [ec_ratios, ed_ratios] {
            let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
            let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
            assert!(min > 0.0);
            let spread = (max - min) / (max + min);
            assert!(spread < 0.05, "ratio spread {spread} exceeds 5%");
        }
    }
}
