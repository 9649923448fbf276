//! Brute-force density-matrix reference for the Bell-diagonal algebra.
//!
//! Everything here works on explicit complex matrices in the computational
//! basis and knows nothing about the weight-vector shortcuts of the parent
//! module. [`oracle_swap`] builds the full 16x16 four-qubit state, projects
//! the middle qubits onto each Bell outcome, applies the matching Pauli
//! feed-forward to the last qubit and reads the Bell weights back from the
//! reduced state. Slow, but independently checkable line by line, which is
//! the point.

use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::BellDiagonalState;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Bell vectors in the computational basis (amplitudes of |00>, |01>, |10>,
/// |11>), ordered like the parent module: psi+, psi-, phi+, phi-.
const BELL_AMPLITUDES: [[f64; 4]; 4] = [
    [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
    [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0],
    [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
    [FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2],
];

/// Dense 4x4 density matrix of a two-qubit state.
#[derive(Debug, Clone)]
pub struct DenseTwoQubitState {
    matrix: [[C; 4]; 4],
}

impl DenseTwoQubitState {
    /// Density matrix of a Bell-diagonal state, `sum_i w_i |B_i><B_i|`.
    pub fn from_bell_diagonal(state: &BellDiagonalState) -> Self {
        let mut matrix = [[ZERO; 4]; 4];
        for (idx, w) in state.weights().iter().enumerate() {
            let v = BELL_AMPLITUDES[idx];
            for (r, row) in matrix.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry += C::new(w * v[r] * v[c], 0.0);
                }
            }
        }
        DenseTwoQubitState { matrix }
    }

    /// Raw matrix entries, row major over `|q1 q2>` with `q1` the high bit.
    pub fn matrix(&self) -> &[[C; 4]; 4] {
        &self.matrix
    }

    /// Trace (should be 1 for a normalized state).
    pub fn trace(&self) -> C {
        (0..4).map(|i| self.matrix[i][i]).sum()
    }

    /// Largest deviation from Hermiticity, `max |rho - rho^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                err = err.max((self.matrix[r][c] - self.matrix[c][r].conj()).norm_sqr());
            }
        }
        crate::math::sqrt(err)
    }

    /// Diagonal Bell-basis weights `<B_i| rho |B_i>`.
    pub fn bell_weights(&self) -> [f64; 4] {
        let mut weights = [0.0; 4];
        for (idx, w) in weights.iter_mut().enumerate() {
            *w = self.bell_element(idx, idx).re;
        }
        weights
    }

    /// Largest off-diagonal Bell-basis element magnitude; near zero exactly
    /// when the state is Bell diagonal.
    pub fn max_bell_off_diagonal(&self) -> f64 {
        let mut max: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    max = max.max(self.bell_element(r, c).norm_sqr());
                }
            }
        }
        crate::math::sqrt(max)
    }

    fn bell_element(&self, r: usize, c: usize) -> C {
        let u = BELL_AMPLITUDES[r];
        let v = BELL_AMPLITUDES[c];
        let mut acc = ZERO;
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += C::new(*ui, 0.0) * self.matrix[i][j] * C::new(*vj, 0.0);
            }
        }
        acc
    }
}

/// Pauli matrices.
const PAULI_I: [[C; 2]; 2] = [[ONE, ZERO], [ZERO, ONE]];
const PAULI_X: [[C; 2]; 2] = [[ZERO, ONE], [ONE, ZERO]];
const PAULI_Z: [[C; 2]; 2] = [[ONE, ZERO], [ZERO, C::new(-1.0, 0.0)]];

fn mat2_mul(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            for k in 0..2 {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    out
}

/// Pauli correction applied to qubit D for BSM outcome `outcome` (an index
/// into the parent module's Bell ordering).
///
/// Writing the outcome as `X^a Z^b` relative to `phi+` (`phi+ -> (0,0)`,
/// `phi- -> (0,1)`, `psi+ -> (1,0)`, `psi- -> (1,1)`), the correction is
/// `X * X^a Z^b`: the `X^a Z^b` part undoes the measured outcome and the
/// extra `X` moves the result from the `phi+` convention to the `psi+` one.
fn correction(outcome: usize) -> [[C; 2]; 2] {
    let (a, b) = match outcome {
        0 => (1, 0), // psi+
        1 => (1, 1), // psi-
        2 => (0, 0), // phi+
        3 => (0, 1), // phi-
        _ => unreachable!(),
    };
    let mut m = PAULI_I;
    if b == 1 {
        m = mat2_mul(PAULI_Z, m);
    }
    if a == 1 {
        m = mat2_mul(PAULI_X, m);
    }
    mat2_mul(PAULI_X, m)
}

/// 16x16 matrices over qubits A, B, C, D with A as the highest bit.
type Mat16 = [[C; 16]; 16];

fn mat16_zero() -> Mat16 {
    [[ZERO; 16]; 16]
}

fn kron4(ab: &[[C; 4]; 4], cd: &[[C; 4]; 4]) -> Mat16 {
    let mut out = mat16_zero();
    for r1 in 0..4 {
        for c1 in 0..4 {
            for r2 in 0..4 {
                for c2 in 0..4 {
                    out[r1 * 4 + r2][c1 * 4 + c2] = ab[r1][c1] * cd[r2][c2];
                }
            }
        }
    }
    out
}

/// Projector `I_A (x) |B_k><B_k|_BC (x) I_D`.
fn bc_projector(outcome: usize) -> Mat16 {
    let v = BELL_AMPLITUDES[outcome];
    let mut out = mat16_zero();
    for a in 0..2 {
        for d in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for b2 in 0..2 {
                        for c2 in 0..2 {
                            let row = a * 8 + b * 4 + c * 2 + d;
                            let col = a * 8 + b2 * 4 + c2 * 2 + d;
                            out[row][col] += C::new(v[b * 2 + c] * v[b2 * 2 + c2], 0.0);
                        }
                    }
                }
            }
        }
    }
    out
}

fn mat16_mul(a: &Mat16, b: &Mat16) -> Mat16 {
    let mut out = mat16_zero();
    for r in 0..16 {
        for k in 0..16 {
            if a[r][k] == ZERO {
                continue;
            }
            for c in 0..16 {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    out
}

/// Conjugation `(I (x) I (x) I (x) u) rho (..)^dagger` acting on qubit D.
fn conjugate_on_d(rho: &Mat16, u: [[C; 2]; 2]) -> Mat16 {
    let mut out = mat16_zero();
    for row in 0..16 {
        for col in 0..16 {
            let (rh, rd) = (row >> 1, row & 1);
            let (ch, cd) = (col >> 1, col & 1);
            let mut acc = ZERO;
            for e in 0..2 {
                for e2 in 0..2 {
                    acc += u[rd][e] * rho[rh << 1 | e][ch << 1 | e2] * u[cd][e2].conj();
                }
            }
            out[row][col] = acc;
        }
    }
    out
}

/// Partial trace over qubits B and C, leaving the A, D pair.
fn trace_out_bc(rho: &Mat16) -> [[C; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for a in 0..2 {
        for d in 0..2 {
            for a2 in 0..2 {
                for d2 in 0..2 {
                    let mut acc = ZERO;
                    for b in 0..2 {
                        for c in 0..2 {
                            acc += rho[a * 8 + b * 4 + c * 2 + d][a2 * 8 + b * 4 + c * 2 + d2];
                        }
                    }
                    out[a * 2 + d][a2 * 2 + d2] = acc;
                }
            }
        }
    }
    out
}

/// Entanglement swapping computed the slow way.
///
/// Builds `rho_AB (x) rho_CD`, projects qubits B and C onto each Bell
/// outcome, applies the outcome's Pauli correction to D, sums the four
/// branches and reads the Bell weights of the reduced A, D state. Agrees
/// with [`BellDiagonalState::swap`] to within `1e-12`.
pub fn oracle_swap(left: &BellDiagonalState, right: &BellDiagonalState) -> BellDiagonalState {
    let rho_ab = DenseTwoQubitState::from_bell_diagonal(left);
    let rho_cd = DenseTwoQubitState::from_bell_diagonal(right);
    let rho = kron4(rho_ab.matrix(), rho_cd.matrix());

    let mut accumulated = mat16_zero();
    for outcome in 0..4 {
        let p = bc_projector(outcome);
        let projected = mat16_mul(&p, &mat16_mul(&rho, &p));
        let corrected = conjugate_on_d(&projected, correction(outcome));
        for r in 0..16 {
            for c in 0..16 {
                accumulated[r][c] += corrected[r][c];
            }
        }
    }

    let reduced = DenseTwoQubitState {
        matrix: trace_out_bc(&accumulated),
    };
    debug_assert!(crate::math::abs(reduced.trace().re - 1.0) < 1e-9);
    debug_assert!(reduced.max_bell_off_diagonal() < 1e-9);
    let w = reduced.bell_weights();
    BellDiagonalState::from_weights(w).expect("oracle produced an invalid weight vector")
}
