//! Closed-form per-memory rates of the partial nesting protocol.
//!
//! With `N >> 1` memories per bank the steady-state rate of raw pair
//! generation per employed memory is
//!
//! ```text
//! Q = P_S * P_M^(2^(n-m+1) + m - 2) * c / (2L)
//! ```
//!
//! The depth `m` trades the BSM exponent against waiting-time dephasing:
//! deeper informed nesting means fewer gambled BSMs but longer storage.
//! The normalized ebit rate multiplies `Q` by an entanglement measure of the
//! state decayed for an effective time that depends on the protocol variant:
//!
//! * no purification: `t = T_(n+1) + (m-1) T_n`, the full accumulated
//!   storage of the delivered chain,
//! * with (ideal, last-level) purification: `t = max(T_ED, T_(m-1))`, only
//!   the last unprotected classical wait,
//! * one-way hashing at level `m`: `t = t_m(m)/2 + T_m/2` evaluated with
//!   the chain's elementary time, using the distillable entanglement.

use crate::chain::RepeaterConfig;
use crate::error::{ensure, Result};
use crate::math;
use crate::measures::{self, MeasureKind};

/// Protocol variant selecting the effective decay time of the delivered
/// state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RateVariant {
    /// Perfect memories, no decay.
    Ideal,
    /// Decaying memories, no purification.
    NoPurification,
    /// Decaying memories with ideal purification at the last informed level.
    WithPurification,
    /// One-way hashing at the last informed level; always yields in units of
    /// distillable entanglement.
    OneWayHashing,
}

/// A rate evaluation: raw pair rate, decay bookkeeping and the resulting
/// normalized ebit rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateResult {
    /// Raw pair generation rate per memory, pairs/s.
    #[cfg_attr(feature = "serde", serde(rename = "q_pairs_per_s_per_memory"))]
    pub q: f64,
    /// Effective decay time entering the measure, seconds.
    #[cfg_attr(feature = "serde", serde(rename = "effective_decay_time_s"))]
    pub effective_decay_time: f64,
    /// Measure value of the decayed state, ebits per pair.
    #[cfg_attr(feature = "serde", serde(rename = "measure_value_ebits_per_pair"))]
    pub measure_value: f64,
    /// Normalized rate `r = q * measure_value`, ebits/s per memory.
    #[cfg_attr(feature = "serde", serde(rename = "rate_ebits_per_s_per_memory"))]
    pub r: f64,
    /// Variant the evaluation used.
    pub variant: RateVariant,
}

/// Exponent of `P_M` in the raw rate: one factor per BSM in a delivered
/// chain, `2^(n-m+1) + m - 2`.
fn bsm_exponent(n: u32, m: u32) -> i32 {
    ((1u64 << (n - m + 1)) + m as u64 - 2) as i32
}

/// Raw pair generation rate per employed memory, `Q` in pairs/s.
///
/// For `nesting == 0` this is the direct heralded link, `P_S * c / (2L)`.
pub fn q_rate(config: &RepeaterConfig) -> Result<f64> {
    config.validate()?;
    let ps = config.success_probability()?;
    let per_attempt = if config.nesting == 0 {
        ps
    } else {
        ps * math::powi(
            config.bsm_success,
            bsm_exponent(config.nesting, config.informed_depth),
        )
    };
    Ok(per_attempt * config.channel.speed / (2.0 * config.length))
}

/// Expected number of end-to-end pairs created per protocol cycle,
/// `N * P_S * P_M^(2^(n-m+1) + m - 2)`.
pub fn pairs_per_cycle(config: &RepeaterConfig) -> Result<f64> {
    let q = q_rate(config)?;
    Ok(q * config.timing()?.t_ed * config.total_memories() as f64)
}

/// Accumulated decay time of a delivered chain without purification,
/// `t_m(n) = T_(n+1) + (m-1) T_n`.
pub fn decay_time_nopur(config: &RepeaterConfig) -> Result<f64> {
    config.validate()?;
    ensure!(
        config.nesting >= 1,
        "the no-purification decay time needs n >= 1, got n = 0"
    );
    let timing = config.timing()?;
    let n = config.nesting;
    let m = config.informed_depth;
    Ok(timing.t_k(n + 1) + (m - 1) as f64 * timing.t_k(n))
}

/// Residual decay time with ideal purification at the last informed level,
/// `max(T_ED, T_(m-1))`: `T_ED` for `m <= 2`, else `T_(m-1)`.
pub fn decay_time_pur(config: &RepeaterConfig) -> Result<f64> {
    config.validate()?;
    ensure!(
        config.nesting >= 1,
        "the purified decay time needs n >= 1, got n = 0"
    );
    let timing = config.timing()?;
    let m = config.informed_depth;
    if m <= 2 {
        Ok(timing.t_ed)
    } else {
        Ok(timing.t_k(m - 1))
    }
}

/// Decay time of the one-way-hashing variant, `t_m(m)/2 + T_m/2` with the
/// chain's elementary time.
fn decay_time_hashing(config: &RepeaterConfig) -> Result<f64> {
    let timing = config.timing()?;
    let m = config.informed_depth;
    let t_m_of_m = timing.t_k(m + 1) + (m - 1) as f64 * timing.t_k(m);
    Ok(t_m_of_m / 2.0 + timing.t_k(m) / 2.0)
}

/// Normalized ebit rate per memory for the chosen variant and measure.
///
/// The `OneWayHashing` variant always uses the distillable entanglement,
/// whatever `measure` says; the hashing yield is that measure by
/// construction. For `nesting == 0` every decaying variant reduces to the
/// single heralded link with decay `T_ED`.
pub fn normalized_rate(
    config: &RepeaterConfig,
    variant: RateVariant,
    measure: MeasureKind,
) -> Result<RateResult> {
    let q = q_rate(config)?;
    let single_link = config.nesting == 0;
    let decay = match variant {
        RateVariant::Ideal => 0.0,
        RateVariant::NoPurification if single_link => config.timing()?.t_ed,
        RateVariant::NoPurification => decay_time_nopur(config)?,
        RateVariant::WithPurification if single_link => config.timing()?.t_ed,
        RateVariant::WithPurification => decay_time_pur(config)?,
        RateVariant::OneWayHashing if single_link => config.timing()?.t_ed,
        RateVariant::OneWayHashing => decay_time_hashing(config)?,
    };
    let effective_measure = match variant {
        RateVariant::OneWayHashing => MeasureKind::DistillableEntanglement,
        _ => measure,
    };
    let fidelity = measures::fidelity_after(decay, config.coherence_time)?;
    let measure_value = measures::measure_value(effective_measure, fidelity)?;
    Ok(RateResult {
        q,
        effective_decay_time: decay,
        measure_value,
        r: q * measure_value,
        variant,
    })
}
