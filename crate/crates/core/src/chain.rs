//! Topology, channel and timing primitives of the repeater chain.
//!
//! A chain of total length `L` has `2^n` elementary links of length
//! `L0 = L / 2^n`. The elementary cycle time is `T_ED = L0 / c`, the
//! round-trip heralding time of one entanglement-distribution attempt, and
//! classical news about a level-`k` connection needs `T_k = 2^(k-1) T_ED` to
//! reach the next nesting level. All values are SI: meters, seconds.

use crate::error::{ensure, Result};
use crate::math;

/// Physical model of the elementary entanglement-distribution channel.
///
/// The per-attempt success probability over an elementary link of length
/// `l0` is
///
/// ```text
/// P_S(l0) = ps_prefactor * 10^(-ps_exponent * l0)
/// ```
///
/// unless `ps_override` pins it to a fixed value. The attenuation
/// coefficient `alpha` enters only the closed-form asymptotics in
/// [`crate::optimize`]; it is kept as an independent parameter because the
/// base-10 loss model above and the `exp(-alpha * l0)` form are not exactly
/// consistent parameterizations of the same fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelModel {
    /// Signal speed in the channel, m/s.
    #[cfg_attr(feature = "serde", serde(rename = "speed_m_per_s"))]
    pub speed: f64,
    /// Inverse attenuation length, 1/m.
    #[cfg_attr(feature = "serde", serde(rename = "alpha_per_m"))]
    pub alpha: f64,
    /// Dimensionless prefactor of the success-probability model.
    pub ps_prefactor: f64,
    /// Base-10 loss exponent per meter of elementary link.
    #[cfg_attr(feature = "serde", serde(rename = "ps_exponent_per_m"))]
    pub ps_exponent: f64,
    /// Fixed success probability overriding the distance model.
    #[cfg_attr(feature = "serde", serde(default))]
    pub ps_override: Option<f64>,
}

impl Default for ChannelModel {
    /// Optical fiber defaults: `c = 2e8 m/s`, attenuation length 50 km,
    /// `P_S = 0.2 * 10^(-0.01 * L0[km])`.
    fn default() -> Self {
        ChannelModel {
            speed: 2.0e8,
            alpha: 1.0 / 50.0e3,
            ps_prefactor: 0.2,
            ps_exponent: 0.01 / 1.0e3,
            ps_override: None,
        }
    }
}

impl ChannelModel {
    /// Checks the model parameters.
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.speed.is_finite() && self.speed > 0.0,
            "channel speed must be positive, got {}",
            self.speed
        );
        ensure!(
            self.alpha.is_finite() && self.alpha > 0.0,
            "alpha must be positive, got {}",
            self.alpha
        );
        ensure!(
            self.ps_prefactor > 0.0 && self.ps_prefactor <= 1.0,
            "ps_prefactor must lie in (0, 1], got {}",
            self.ps_prefactor
        );
        ensure!(
            self.ps_exponent.is_finite() && self.ps_exponent >= 0.0,
            "ps_exponent must be non-negative, got {}",
            self.ps_exponent
        );
        if let Some(ps) = self.ps_override {
            ensure!(
                ps > 0.0 && ps <= 1.0,
                "ps_override must lie in (0, 1], got {ps}"
            );
        }
        Ok(())
    }

    /// Success probability of one entanglement-distribution attempt over an
    /// elementary link of length `l0` meters.
    pub fn success_probability(&self, l0: f64) -> Result<f64> {
        self.validate()?;
        ensure!(
            l0.is_finite() && l0 > 0.0,
            "elementary link length must be positive, got {l0}"
        );
        if let Some(ps) = self.ps_override {
            return Ok(ps);
        }
        Ok(self.ps_prefactor * math::powf(10.0, -self.ps_exponent * l0))
    }
}

/// Full configuration of a repeater chain: topology plus physics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RepeaterConfig {
    /// End-to-end distance `L`, meters.
    #[cfg_attr(feature = "serde", serde(rename = "length_m"))]
    pub length: f64,
    /// Nesting level `n`; the chain has `2^n` elementary links. `n = 0` is a
    /// single heralded link with no intermediate stations.
    pub nesting: u32,
    /// Informed-BSM depth `m` with `1 <= m <= n`; ignored when `nesting == 0`.
    pub informed_depth: u32,
    /// Memories per bank `N` (two banks per station, one per chain end).
    pub memories: u32,
    /// BSM success probability `P_M`.
    pub bsm_success: f64,
    /// Memory coherence time `tau_c`, seconds.
    #[cfg_attr(feature = "serde", serde(rename = "coherence_time_s"))]
    pub coherence_time: f64,
    /// Elementary-link channel model.
    pub channel: ChannelModel,
}

/// Largest supported nesting level. `2^(n+1)` banks must stay addressable
/// and the BSM exponent `2^(n-m+1) + m - 2` must fit an `i32`.
pub const MAX_NESTING: u32 = 30;

impl RepeaterConfig {
    /// Checks all invariants of the configuration.
    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.length.is_finite() && self.length > 0.0,
            "total length must be positive, got {}",
            self.length
        );
        ensure!(
            self.nesting <= MAX_NESTING,
            "nesting level {} exceeds the supported maximum {MAX_NESTING}",
            self.nesting
        );
        if self.nesting >= 1 {
            ensure!(
                (1..=self.nesting).contains(&self.informed_depth),
                "informed depth must satisfy 1 <= m <= n, got m = {}, n = {}",
                self.informed_depth,
                self.nesting
            );
        }
        ensure!(self.memories >= 1, "at least one memory per bank is required");
        ensure!(
            self.bsm_success > 0.0 && self.bsm_success <= 1.0,
            "BSM success probability must lie in (0, 1], got {}",
            self.bsm_success
        );
        ensure!(
            self.coherence_time.is_finite() && self.coherence_time > 0.0,
            "coherence time must be positive, got {}",
            self.coherence_time
        );
        self.channel.validate()
    }

    /// Elementary link length `L0 = L / 2^n`, meters.
    pub fn elementary_length(&self) -> f64 {
        self.length / (1u64 << self.nesting) as f64
    }

    /// Per-attempt success probability over one elementary link.
    pub fn success_probability(&self) -> Result<f64> {
        self.channel.success_probability(self.elementary_length())
    }

    /// Total number of employed memories, `N * 2^(n+1)`.
    pub fn total_memories(&self) -> u64 {
        self.memories as u64 * (1u64 << (self.nesting + 1))
    }

    /// Timing quantities derived from this configuration.
    pub fn timing(&self) -> Result<TimingModel> {
        self.validate()?;
        Ok(TimingModel {
            t_ed: self.elementary_length() / self.channel.speed,
        })
    }
}

/// Cycle and classical-communication delays of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimingModel {
    /// Elementary cycle time `T_ED = L0 / c`, seconds.
    #[cfg_attr(feature = "serde", serde(rename = "t_ed_s"))]
    pub t_ed: f64,
}

impl TimingModel {
    /// Classical delay `T_k = 2^(k-1) T_ED` between nesting levels `k` and
    /// `k + 1`, for `k >= 1`.
    pub fn t_k(&self, k: u32) -> f64 {
        debug_assert!(k >= 1, "T_k is defined for k >= 1");
        (1u64 << (k - 1)) as f64 * self.t_ed
    }

    /// End-to-end signal delay `L / c`, equal to `T_(n+1)`.
    pub fn total_delay(&self, nesting: u32) -> f64 {
        (1u64 << nesting) as f64 * self.t_ed
    }
}
