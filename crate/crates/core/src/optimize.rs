//! Exhaustive `(n, m)` optimization, closed-form asymptotics and scaling
//! fits.
//!
//! The rate formulas are cheap, so the optimizer simply evaluates the whole
//! grid `1 <= m <= n <= n_max`. In the long-distance, short-coherence limit
//! the optimum is characterized in closed form: the elementary link settles
//! at `L0 = 2 ln(1/P_M) / alpha` and the informed depth grows like
//! `2^m = alpha sqrt(2 L c tau_c / ln(1/P_M))`, which makes the optimized
//! rate fall off as `exp(-2 sqrt(L ln(1/P_M) / (c tau_c)))`.

use alloc::vec::Vec;

use crate::chain::{ChannelModel, RepeaterConfig};
use crate::error::{ensure, Result};
use crate::math;
use crate::measures::MeasureKind;
use crate::rates::{normalized_rate, RateVariant};

/// Physical parameters shared by every grid point of an optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Physics {
    /// BSM success probability `P_M`.
    pub bsm_success: f64,
    /// Memory coherence time, seconds.
    #[cfg_attr(feature = "serde", serde(rename = "coherence_time_s"))]
    pub coherence_time: f64,
    /// Elementary-link channel model.
    pub channel: ChannelModel,
}

impl Physics {
    /// Repeater configuration at one grid point. Rates do not depend on the
    /// memory count, so it is fixed at one.
    pub fn config(&self, length: f64, n: u32, m: u32) -> RepeaterConfig {
        RepeaterConfig {
            length,
            nesting: n,
            informed_depth: m,
            memories: 1,
            bsm_success: self.bsm_success,
            coherence_time: self.coherence_time,
            channel: self.channel,
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridPoint {
    /// Nesting level.
    pub n: u32,
    /// Informed depth.
    pub m: u32,
    /// Normalized rate, ebits/s per memory.
    #[cfg_attr(feature = "serde", serde(rename = "rate_ebits_per_s_per_memory"))]
    pub rate: f64,
}

/// Result of a grid optimization over `(n, m)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizationResult {
    /// Optimal nesting level.
    pub n_opt: u32,
    /// Optimal informed depth.
    pub m_opt: u32,
    /// Optimal normalized rate, ebits/s per memory.
    #[cfg_attr(feature = "serde", serde(rename = "r_opt_ebits_per_s_per_memory"))]
    pub r_opt: f64,
    /// Elementary link length at the optimum, meters.
    #[cfg_attr(feature = "serde", serde(rename = "l0_opt_m"))]
    pub l0_opt: f64,
    /// Every evaluated grid point, in scan order.
    pub table: Vec<GridPoint>,
}

/// Exhaustive search of the normalized rate over `1 <= n <= n_max`,
/// `1 <= m <= n`.
///
/// Ties break toward the smaller `n`, then the smaller `m`: when two
/// architectures deliver the same rate the less costly one wins.
pub fn optimize(
    length: f64,
    physics: &Physics,
    variant: RateVariant,
    measure: MeasureKind,
    n_max: u32,
) -> Result<OptimizationResult> {
    ensure!(n_max >= 1, "the search grid needs n_max >= 1, got {n_max}");
    let mut table = Vec::with_capacity((n_max as usize * (n_max as usize + 1)) / 2);
    let mut best: Option<GridPoint> = None;
    for n in 1..=n_max {
        for m in 1..=n {
            let rate = normalized_rate(&physics.config(length, n, m), variant, measure)?.r;
            let point = GridPoint { n, m, rate };
            table.push(point);
            if best.map_or(true, |b| rate > b.rate) {
                best = Some(point);
            }
        }
    }
    let best = best.expect("grid is non-empty");
    Ok(OptimizationResult {
        n_opt: best.n,
        m_opt: best.m,
        r_opt: best.rate,
        l0_opt: length / (1u64 << best.n) as f64,
        table,
    })
}

/// Asymptotically optimal elementary link length, `2 ln(1/P_M) / alpha`
/// meters.
pub fn asymptotic_l0_opt(bsm_success: f64, alpha: f64) -> Result<f64> {
    ensure!(
        bsm_success > 0.0 && bsm_success < 1.0,
        "the asymptotic optimum needs P_M strictly inside (0, 1), got {bsm_success}"
    );
    ensure!(alpha > 0.0, "alpha must be positive, got {alpha}");
    Ok(2.0 * math::ln(1.0 / bsm_success) / alpha)
}

/// Asymptotically optimal informed depth, returned as the real-valued
/// `log2(alpha * sqrt(2 L c tau_c / ln(1/P_M)))`; callers round to a valid
/// integer depth.
pub fn asymptotic_m_opt(
    length: f64,
    bsm_success: f64,
    coherence_time: f64,
    speed: f64,
    alpha: f64,
) -> Result<f64> {
    ensure!(
        bsm_success > 0.0 && bsm_success < 1.0,
        "the asymptotic optimum needs P_M strictly inside (0, 1), got {bsm_success}"
    );
    ensure!(
        length > 0.0 && coherence_time > 0.0 && speed > 0.0 && alpha > 0.0,
        "length, coherence time, speed and alpha must all be positive"
    );
    let two_pow_m =
        alpha * math::sqrt(2.0 * length * speed * coherence_time / math::ln(1.0 / bsm_success));
    Ok(math::log2(two_pow_m))
}

/// Simple least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    /// Fitted slope.
    pub slope: f64,
    /// Fitted intercept.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Unweighted least-squares fit of `y = intercept + slope * x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    ensure!(points.len() >= 2, "a line fit needs at least two points");
    let len = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / len;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / len;
    let covariance: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let variance: f64 = points.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    ensure!(variance > 0.0, "a line fit needs distinct x values");
    let slope = covariance / variance;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = points
        .iter()
        .map(|(_, y)| (y - mean_y) * (y - mean_y))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// One distance sample of a scaling study.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingSample {
    /// Total distance, meters.
    #[cfg_attr(feature = "serde", serde(rename = "length_m"))]
    pub length: f64,
    /// Optimized normalized rate at that distance.
    #[cfg_attr(feature = "serde", serde(rename = "r_opt_ebits_per_s_per_memory"))]
    pub r_opt: f64,
}

/// Fit of `ln R_opt` against `-sqrt(L)` compared with the closed-form slope.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingFit {
    /// Fitted coefficient of `-sqrt(L)`, 1/sqrt(m).
    #[cfg_attr(feature = "serde", serde(rename = "fitted_slope_per_sqrt_m"))]
    pub slope: f64,
    /// Closed-form prediction `2 sqrt(ln(1/P_M) / (c tau_c))`.
    #[cfg_attr(feature = "serde", serde(rename = "predicted_slope_per_sqrt_m"))]
    pub predicted_slope: f64,
    /// `|slope - predicted| / predicted`.
    pub relative_error: f64,
    /// Goodness of the straight-line fit in `(sqrt(L), ln R)`.
    pub r_squared: f64,
    /// The sampled distances and optimized rates.
    pub samples: Vec<ScalingSample>,
}

/// Grid size used by [`scaling_fit`]; covers elementary links down to a few
/// kilometers for distances up to about `10^5` km.
pub const DEFAULT_N_MAX: u32 = 24;

/// Optimizes the rate at each distance and fits `ln R_opt` against
/// `-sqrt(L)`.
///
/// The closed-form slope only applies deep in the decay-limited regime, so
/// the largest distance must satisfy `L/c >= 20 tau_c`; shorter ranges are
/// rejected. At least six distances are required.
pub fn scaling_fit(
    physics: &Physics,
    variant: RateVariant,
    measure: MeasureKind,
    lengths: &[f64],
) -> Result<ScalingFit> {
    ensure!(
        lengths.len() >= 6,
        "a scaling fit needs at least 6 distances, got {}",
        lengths.len()
    );
    let max_length = lengths.iter().cloned().fold(0.0_f64, f64::max);
    ensure!(
        max_length / physics.channel.speed >= 20.0 * physics.coherence_time,
        "scaling regime violated: need max(L)/c >= 20 tau_c, got L/c = {:e} s with tau_c = {:e} s",
        max_length / physics.channel.speed,
        physics.coherence_time
    );

    let mut samples = Vec::with_capacity(lengths.len());
    let mut points = Vec::with_capacity(lengths.len());
    for &length in lengths {
        let opt = optimize(length, physics, variant, measure, DEFAULT_N_MAX)?;
        ensure!(
            opt.r_opt > 0.0,
            "optimized rate vanished at L = {length} m; the fit cannot take its logarithm"
        );
        samples.push(ScalingSample {
            length,
            r_opt: opt.r_opt,
        });
        points.push((-math::sqrt(length), math::ln(opt.r_opt)));
    }

    let fit = linear_fit(&points)?;
    let predicted_slope = 2.0
        * math::sqrt(
            math::ln(1.0 / physics.bsm_success) / (physics.channel.speed * physics.coherence_time),
        );
    Ok(ScalingFit {
        slope: fit.slope,
        predicted_slope,
        relative_error: math::abs(fit.slope - predicted_slope) / predicted_slope,
        r_squared: fit.r_squared,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::abs;

    fn physics(pm: f64, tau: f64) -> Physics {
        Physics {
            bsm_success: pm,
            coherence_time: tau,
            channel: ChannelModel::default(),
        }
    }

    #[test]
    fn grid_matches_independent_scan() {
        // Reference point evaluated with an independent scripted grid scan:
        // L = 1000 km, P_M = 0.5, tau_c = 1 ms, purified, entanglement cost.
        let opt = optimize(
            1.0e6,
            &physics(0.5, 1.0e-3),
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            24,
        )
        .unwrap();
        assert_eq!((opt.n_opt, opt.m_opt), (5, 4));
        assert!(
            abs(opt.r_opt - 5.993784791238e-2) < 1e-9,
            "r_opt = {}",
            opt.r_opt
        );
        assert_eq!(opt.l0_opt, 1.0e6 / 32.0);
        // The table must contain the full triangular grid and agree with
        // the reported maximum.
        assert_eq!(opt.table.len(), 24 * 25 / 2);
        let table_max = opt.table.iter().map(|p| p.rate).fold(f64::MIN, f64::max);
        assert_eq!(table_max, opt.r_opt);
    }

    #[test]
    fn long_coherence_prefers_full_nesting() {
        // With tau_c >> L/c the optimizer lands on m = n.
        let opt = optimize(
            1.0e6,
            &physics(0.75, 10.0),
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            24,
        )
        .unwrap();
        assert_eq!(opt.m_opt, opt.n_opt);
    }

    #[test]
    fn deterministic_bsm_reduces_to_loss_optimum() {
        // P_M = 1 removes the BSM penalty; the optimum maximizes P_S alone
        // and runs to the grid edge where every variant agrees.
        let p = Physics {
            bsm_success: 1.0,
            coherence_time: 1.0e9,
            channel: ChannelModel::default(),
        };
        let opt = optimize(
            1.0e6,
            &p,
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            12,
        )
        .unwrap();
        assert_eq!(opt.n_opt, 12);
        assert_eq!(opt.m_opt, 1, "ties break toward the smaller m");
    }

    #[test]
    fn optimize_rejects_empty_grid() {
        assert!(optimize(
            1.0e6,
            &physics(0.5, 1.0e-3),
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            0
        )
        .is_err());
    }

    #[test]
    fn asymptotic_link_length() {
        // 1/alpha = 50 km: P_M = 0.5 gives 69.31 km, P_M = 0.75 gives
        // 28.77 km, and P_M = exp(-1/2) cancels to exactly 50 km.
        let alpha = 1.0 / 50.0e3;
        let l0 = asymptotic_l0_opt(0.5, alpha).unwrap();
        assert!(abs(l0 - 69.31471805599453e3) < 1e-6);
        let l0 = asymptotic_l0_opt(0.75, alpha).unwrap();
        assert!(abs(l0 - 28.76820724517809e3) < 1e-6);
        let l0 = asymptotic_l0_opt(math::exp(-0.5), alpha).unwrap();
        assert!(abs(l0 - 50.0e3) < 1e-6);
        assert!(asymptotic_l0_opt(1.0, alpha).is_err());
    }

    #[test]
    fn asymptotic_depth() {
        // L = 1000 km, P_M = 0.5, tau_c = 1 ms: 2^m is about 15.2.
        let log2_m = asymptotic_m_opt(1.0e6, 0.5, 1.0e-3, 2.0e8, 1.0 / 50.0e3).unwrap();
        let two_pow = math::powf(2.0, log2_m);
        assert!(abs(two_pow - 15.1935) < 1e-3, "2^m = {two_pow}");
        assert_eq!(math::powf(2.0, log2_m).round() as i64, 15);

        // Square-root scaling: quadrupling L or tau_c doubles 2^m.
        let base = asymptotic_m_opt(1.0e6, 0.5, 1.0e-3, 2.0e8, 1.0 / 50.0e3).unwrap();
        let l4 = asymptotic_m_opt(4.0e6, 0.5, 1.0e-3, 2.0e8, 1.0 / 50.0e3).unwrap();
        let t4 = asymptotic_m_opt(1.0e6, 0.5, 4.0e-3, 2.0e8, 1.0 / 50.0e3).unwrap();
        assert!(abs(l4 - (base + 1.0)) < 1e-12);
        assert!(abs(t4 - (base + 1.0)) < 1e-12);
        assert!(asymptotic_m_opt(1.0e6, 1.0, 1.0e-3, 2.0e8, 1.0 / 50.0e3).is_err());
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        let fit = linear_fit(&pts).unwrap();
        assert!(abs(fit.slope + 0.5) < 1e-12);
        assert!(abs(fit.intercept - 3.0) < 1e-12);
        assert!(abs(fit.r_squared - 1.0) < 1e-12);
        assert!(linear_fit(&pts[0..1]).is_err());
        assert!(linear_fit(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    fn log_spaced(from: f64, to: f64, count: usize) -> Vec<f64> {
        let step = math::ln(to / from) / (count - 1) as f64;
        (0..count)
            .map(|i| from * math::exp(step * i as f64))
            .collect()
    }

    #[test]
    fn scaling_fit_matches_closed_form_slope() {
        let lengths = log_spaced(2.0e6, 2.0e7, 12);
        let fit = scaling_fit(
            &physics(0.5, 1.0e-4),
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            &lengths,
        )
        .unwrap();
        assert!(
            fit.relative_error < 0.15,
            "relative error {} too large",
            fit.relative_error
        );
        assert!(fit.samples.len() == 12);
        // Doubling tau_c shrinks the predicted slope by sqrt(2).
        let fit2 = scaling_fit(
            &physics(0.5, 2.0e-4),
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            &lengths,
        )
        .unwrap();
        assert!(abs(fit.predicted_slope / fit2.predicted_slope - math::sqrt(2.0)) < 1e-12);
    }

    #[test]
    fn scaling_fit_enforces_regime_and_size() {
        let p = physics(0.5, 0.1);
        // tau_c = 100 ms with L up to 2000 km violates L/c >= 20 tau_c.
        let lengths = log_spaced(1.0e5, 2.0e6, 8);
        assert!(scaling_fit(
            &p,
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            &lengths
        )
        .is_err());
        let p = physics(0.5, 1.0e-4);
        let lengths = log_spaced(2.0e6, 2.0e7, 5);
        assert!(scaling_fit(
            &p,
            RateVariant::WithPurification,
            MeasureKind::EntanglementCost,
            &lengths
        )
        .is_err());
    }

    #[test]
    fn optimized_rate_non_increasing_in_distance() {
        let p = physics(0.6, 1.0e-3);
        let mut prev = f64::INFINITY;
        for length in log_spaced(2.0e5, 2.0e7, 10) {
            let opt = optimize(
                length,
                &p,
                RateVariant::WithPurification,
                MeasureKind::EntanglementCost,
                24,
            )
            .unwrap();
            assert!(opt.r_opt <= prev * (1.0 + 1e-12), "rate rose at L = {length}");
            prev = opt.r_opt;
        }
    }
}
