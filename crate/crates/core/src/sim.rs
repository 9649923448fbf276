//! Cycle-accurate Monte-Carlo simulation of the partial nesting protocol
//! with finite memory banks.
//!
//! Time advances in units of the elementary cycle `T_ED`; every classical
//! delay in the chain is an exact multiple of it, so no fractional-cycle
//! events exist. One cycle runs four phases in order:
//!
//! 1. **News.** Scheduled failure notifications arrive and release the
//!    affected memories; the outcomes of last cycle's elementary attempts
//!    are revealed (the herald needs one full cycle). Successes become live
//!    level-0 pairs.
//! 2. **Informed connections, levels `1..m-1`.** Each station matches the
//!    confirmed pairs of its two sides and swaps them with success
//!    probability `P_M`. A level-`k` station learns about a level-`k-1`
//!    pair `T_(k-1)` after its creation; heralds count as instantly known.
//!    Matching is same-wave: a pair that finds no partner in the cycle its
//!    confirmation arrives is released on the spot (the station resets its
//!    own memory, the far end learns at signal speed). Surviving chains are
//!    therefore always built from pairs of one wave, which is what makes
//!    the delivered ages below exact. On swap failure both input pairs are
//!    destroyed and their outer memories stay blocked until the failure
//!    news reaches them.
//! 3. **Cohort connections, levels `m..n`.** The oldest confirmed
//!    level-`m-1` pair of every segment forms a cohort. Once every junction
//!    station has received the confirmations of its two neighbours, all
//!    `2^(n-m+1) - 1` remaining swaps (informed at level `m`, blind above)
//!    fire in the same cycle, together with the end-node measurements. The
//!    cohort delivers exactly when every swap succeeds; either way all its
//!    memories are measured and released in that cycle.
//! 4. **Attempts.** Every pair of free memories across each elementary link
//!    starts a fresh entanglement attempt, succeeding next cycle with
//!    probability `P_S`. Memories released earlier in the same cycle may
//!    re-attempt immediately.
//!
//! Pair ages are tracked in whole cycles as the argument of the decayed
//! state: a pair is one cycle old at its herald, ages one cycle per cycle
//! while both ends are stored, and a swap adds the ages of its inputs. In
//! the deterministic limit (`P_S = P_M = 1`) every delivered pair is
//! therefore exactly `T_(n+1) + (m-1) T_n` old, matching the closed-form
//! no-purification decay time; stochastic cohort assembly can only wait
//! longer, so that value is also the hard lower bound on any delivered
//! age. Purification itself is not simulated; it enters the rate model
//! only through the analytic measure factor.
//!
//! Runs are reproducible bit for bit: the seed expands through SplitMix64
//! into a ChaCha12 key pinned in this crate, and all draws happen in a
//! fixed deterministic order (links ascending, stations ascending, cohort
//! junctions left to right).

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chain::RepeaterConfig;
use crate::error::{ensure, Result};
use crate::measures::{self, MeasureKind};
use crate::rates;

/// Identifier of the pseudo-random generator recorded in [`SimStats`].
pub const PRNG_ID: &str = "chacha12/splitmix64-seed";

/// Largest nesting level the simulator accepts; `2^(n+1)` banks must stay
/// comfortably in memory.
pub const MAX_SIM_NESTING: u32 = 20;

/// Simulation parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    /// Chain under simulation.
    pub repeater: RepeaterConfig,
    /// Total number of `T_ED` cycles to run.
    pub cycles: u64,
    /// Leading cycles excluded from the statistics.
    pub warmup_cycles: u64,
    /// PRNG seed; fully determines the run.
    pub seed: u64,
    /// Record the full delivered-age histogram.
    pub track_ages: bool,
    /// Measure mapping delivered-pair ages to ebits.
    pub measure: MeasureKind,
}

impl SimConfig {
    /// Checks the simulation parameters.
    pub fn validate(&self) -> Result<()> {
        self.repeater.validate()?;
        ensure!(
            self.repeater.nesting <= MAX_SIM_NESTING,
            "simulated nesting level {} exceeds the supported maximum {MAX_SIM_NESTING}",
            self.repeater.nesting
        );
        ensure!(
            self.cycles > self.warmup_cycles,
            "need cycles > warmup_cycles, got {} <= {}",
            self.cycles,
            self.warmup_cycles
        );
        Ok(())
    }
}

/// A live entangled pair spanning a `D_level` segment of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairRecord {
    /// Nesting level `k` of the spanned segment (length `2^k L0`).
    pub level: u32,
    /// Cycle the pair came into existence (herald or swap).
    pub created_cycle: u64,
    /// Decay argument at creation, in cycles.
    pub decay_at_creation: u64,
    /// Bank index of the left end memory.
    pub left_bank: u32,
    /// Bank index of the right end memory.
    pub right_bank: u32,
}

impl PairRecord {
    /// Decay argument after continuing to sit in memory until `now`.
    pub fn age_cycles(&self, now: u64) -> u64 {
        self.decay_at_creation + (now - self.created_cycle)
    }
}

/// Attempt/success counters of one nesting level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BsmLevelStats {
    /// Nesting level of the connection.
    pub level: u32,
    /// Swaps attempted after warmup.
    pub attempts: u64,
    /// Swaps that succeeded.
    pub successes: u64,
}

/// Aggregated results of one run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimStats {
    /// Exact configuration the run used.
    pub config: SimConfig,
    /// PRNG algorithm identifier.
    pub prng: String,
    /// Cycles contributing to the statistics (`cycles - warmup_cycles`).
    pub cycles_counted: u64,
    /// End-to-end pairs delivered after warmup.
    pub delivered_pairs: u64,
    /// End-to-end delivery trials (assembled cohorts, or heralded attempts
    /// for a single link).
    pub end_to_end_trials: u64,
    /// Confirmed pairs released unmatched by the same-wave matching policy.
    pub discarded_pairs: u64,
    /// Delivered pairs per second per employed memory.
    #[cfg_attr(feature = "serde", serde(rename = "measured_pair_rate_per_s_per_memory"))]
    pub measured_normalized_rate: f64,
    /// Binomial standard error of the measured pair rate.
    #[cfg_attr(feature = "serde", serde(rename = "pair_rate_standard_error_per_s_per_memory"))]
    pub rate_standard_error: f64,
    /// Delivered ebits per second per memory: each pair's age mapped through
    /// the configured measure.
    #[cfg_attr(feature = "serde", serde(rename = "measured_ebit_rate_per_s_per_memory"))]
    pub measured_ebit_rate: f64,
    /// Mean delivered-pair decay argument, seconds.
    pub mean_delivered_age_s: f64,
    /// Smallest delivered age in cycles (0 when nothing was delivered).
    pub min_delivered_age_cycles: u64,
    /// Largest delivered age in cycles.
    pub max_delivered_age_cycles: u64,
    /// Delivered-age histogram keyed by age in cycles, when tracked.
    pub age_histogram_cycles: Option<BTreeMap<u64, u64>>,
    /// Per-level swap counters, level 1 through `n`.
    pub bsm_levels: Vec<BsmLevelStats>,
}

/// Ratio of measured to analytic rates with statistical errors.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalyticComparison {
    /// Closed-form raw pair rate `Q`, pairs/s per memory.
    #[cfg_attr(feature = "serde", serde(rename = "analytic_pair_rate_per_s_per_memory"))]
    pub analytic_pair_rate: f64,
    /// Measured over analytic pair rate.
    pub pair_rate_ratio: f64,
    /// Standard error of the pair-rate ratio.
    pub pair_rate_sigma: f64,
    /// Closed-form no-purification ebit rate under the run's measure.
    #[cfg_attr(feature = "serde", serde(rename = "analytic_ebit_rate_per_s_per_memory"))]
    pub analytic_ebit_rate: f64,
    /// Measured over analytic ebit rate.
    pub ebit_rate_ratio: f64,
    /// Standard error of the ebit-rate ratio, scaled from the pair-rate
    /// error by the mean measure value.
    pub ebit_rate_sigma: f64,
}

/// Deterministic Bernoulli source.
///
/// The 64-bit seed expands through SplitMix64 into the full ChaCha12 key so
/// that the byte stream is pinned by this crate, not by whatever
/// `SeedableRng::seed_from_u64` happens to do in a given `rand_core`
/// release.
struct SimRng {
    inner: ChaCha12Rng,
}

impl SimRng {
    fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_mut(8) {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            chunk.copy_from_slice(&z.to_le_bytes());
        }
        SimRng {
            inner: ChaCha12Rng::from_seed(key),
        }
    }

    /// One biased coin flip. Always consumes exactly one draw; the integer
    /// threshold comparison keeps `p = 1` and `p = 0` exact.
    fn bernoulli(&mut self, p: f64) -> bool {
        let draw = self.inner.next_u64();
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            draw < (p * 18_446_744_073_709_551_616.0) as u64
        }
    }
}

/// Occupancy counters of one memory bank.
#[derive(Debug, Clone, Copy, Default)]
struct Bank {
    free: u32,
    /// Attempt in flight, outcome unknown.
    attempting: u32,
    /// Holding one end of a live pair.
    engaged: u32,
    /// Pair destroyed remotely; waiting for the failure news.
    zombie: u32,
}

struct Engine {
    repeater: RepeaterConfig,
    warmup: u64,
    measure: MeasureKind,
    n: u32,
    depth: u32,
    links: usize,
    t_ed: f64,
    p_s: f64,
    p_m: f64,
    rng: SimRng,
    banks: Vec<Bank>,
    /// `queues[j][slot]`: confirmed level-`j` pairs, oldest first.
    queues: Vec<Vec<VecDeque<PairRecord>>>,
    /// Attempts launched last cycle, per link.
    attempts_in_flight: Vec<u32>,
    /// Failure news in transit: `ring[cycle % len]` lists banks released on
    /// that cycle.
    release_ring: Vec<Vec<u32>>,
    cohort_scratch: Vec<PairRecord>,
    // Post-warmup accumulators.
    delivered: u64,
    trials: u64,
    discarded: u64,
    age_sum_cycles: u128,
    min_age: u64,
    max_age: u64,
    ebit_sum: f64,
    histogram: Option<BTreeMap<u64, u64>>,
    level_attempts: Vec<u64>,
    level_successes: Vec<u64>,
}

impl Engine {
    fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let repeater = config.repeater;
        let n = repeater.nesting;
        let links = 1usize << n;
        let timing = repeater.timing()?;
        let depth = if n == 0 { 0 } else { repeater.informed_depth };
        let queues = (0..depth)
            .map(|j| vec![VecDeque::new(); links >> j])
            .collect();
        Ok(Engine {
            repeater,
            warmup: config.warmup_cycles,
            measure: config.measure,
            n,
            depth,
            links,
            t_ed: timing.t_ed,
            p_s: repeater.success_probability()?,
            p_m: repeater.bsm_success,
            rng: SimRng::new(config.seed),
            banks: vec![
                Bank {
                    free: repeater.memories,
                    ..Bank::default()
                };
                links * 2
            ],
            queues,
            attempts_in_flight: vec![0; links],
            release_ring: vec![Vec::new(); links + 1],
            cohort_scratch: Vec::new(),
            delivered: 0,
            trials: 0,
            discarded: 0,
            age_sum_cycles: 0,
            min_age: u64::MAX,
            max_age: 0,
            ebit_sum: 0.0,
            histogram: config.track_ages.then(BTreeMap::new),
            level_attempts: vec![0; n as usize],
            level_successes: vec![0; n as usize],
        })
    }

    /// Classical delay, in cycles, before a level-`j` pair is usable by the
    /// station one nesting level up. Heralds are known at both link ends
    /// immediately; a level-`j >= 1` swap result has to travel half the new
    /// segment, `T_j` in protocol terms.
    fn knowledge_delay(j: u32) -> u64 {
        if j == 0 {
            0
        } else {
            1u64 << (j - 1)
        }
    }

    /// Physical position of a bank along the chain, in units of `L0`.
    fn bank_position(bank: u32) -> u64 {
        (bank as u64 + 1) / 2
    }

    fn step(&mut self, now: u64) {
        self.deliver_release_news(now);
        self.reveal_attempts(now);
        if self.n >= 1 {
            self.run_informed_stations(now);
            self.run_cohorts(now);
        }
        self.launch_attempts();
        #[cfg(debug_assertions)]
        self.audit();
    }

    fn deliver_release_news(&mut self, now: u64) {
        let slot = (now % self.release_ring.len() as u64) as usize;
        let mut due = core::mem::take(&mut self.release_ring[slot]);
        for bank in due.drain(..) {
            let b = &mut self.banks[bank as usize];
            b.zombie -= 1;
            b.free += 1;
        }
        self.release_ring[slot] = due;
    }

    fn reveal_attempts(&mut self, now: u64) {
        for link in 0..self.links {
            let launched = self.attempts_in_flight[link];
            self.attempts_in_flight[link] = 0;
            let (left, right) = (2 * link as u32, 2 * link as u32 + 1);
            for _ in 0..launched {
                let success = self.rng.bernoulli(self.p_s);
                if success && self.n == 0 {
                    // Single heralded link: the herald is the delivery and
                    // both end memories are measured immediately.
                    for bank in [left, right] {
                        let b = &mut self.banks[bank as usize];
                        b.attempting -= 1;
                        b.free += 1;
                    }
                    if now >= self.warmup {
                        self.trials += 1;
                        self.record_delivery(1, now);
                    }
                } else if success {
                    for bank in [left, right] {
                        let b = &mut self.banks[bank as usize];
                        b.attempting -= 1;
                        b.engaged += 1;
                    }
                    self.queues[0][link].push_back(PairRecord {
                        level: 0,
                        created_cycle: now,
                        decay_at_creation: 1,
                        left_bank: left,
                        right_bank: right,
                    });
                } else {
                    for bank in [left, right] {
                        let b = &mut self.banks[bank as usize];
                        b.attempting -= 1;
                        b.free += 1;
                    }
                    if self.n == 0 && now >= self.warmup {
                        self.trials += 1;
                    }
                }
            }
        }
    }

    /// Informed swaps at levels `1..depth-1` inclusive (the level-`depth`
    /// swaps belong to the cohort stage).
    fn run_informed_stations(&mut self, now: u64) {
        for k in 1..self.depth {
            let delay = Self::knowledge_delay(k - 1);
            let stations = self.links >> k;
            for s in 0..stations {
                let ready = |q: &VecDeque<PairRecord>| {
                    q.front().is_some_and(|r| r.created_cycle + delay <= now)
                };
                loop {
                    let level_queues = &self.queues[(k - 1) as usize];
                    if !ready(&level_queues[2 * s]) || !ready(&level_queues[2 * s + 1]) {
                        break;
                    }
                    let left = self.queues[(k - 1) as usize][2 * s].pop_front().unwrap();
                    let right = self.queues[(k - 1) as usize][2 * s + 1].pop_front().unwrap();
                    self.swap_pair(left, right, k, s, now);
                }
                // Same-wave policy: whatever is confirmed but still
                // unmatched now is released rather than left to pair with a
                // later wave. At most one side has leftovers.
                for (slot, station_side_is_right) in [(2 * s, true), (2 * s + 1, false)] {
                    while ready(&self.queues[(k - 1) as usize][slot]) {
                        let pair = self.queues[(k - 1) as usize][slot].pop_front().unwrap();
                        self.discard_pair(pair, station_side_is_right, now);
                    }
                }
            }
        }
    }

    /// Releases a confirmed pair nobody can use: the memory next to the
    /// deciding station frees now, the far end when the news arrives.
    fn discard_pair(&mut self, pair: PairRecord, station_side_is_right: bool, now: u64) {
        let (near, far) = if station_side_is_right {
            (pair.right_bank, pair.left_bank)
        } else {
            (pair.left_bank, pair.right_bank)
        };
        self.free_memory(near);
        self.block_until_news(far, Self::bank_position(near), now);
        if now >= self.warmup {
            self.discarded += 1;
        }
    }

    fn swap_pair(&mut self, left: PairRecord, right: PairRecord, k: u32, slot: usize, now: u64) {
        debug_assert_eq!(left.right_bank + 1, right.left_bank);
        let success = self.count_bsm(k, now);
        // The station's two memories are measured either way.
        self.free_memory(left.right_bank);
        self.free_memory(right.left_bank);
        if success {
            self.queues[k as usize][slot].push_back(PairRecord {
                level: k,
                created_cycle: now,
                decay_at_creation: left.age_cycles(now) + right.age_cycles(now),
                left_bank: left.left_bank,
                right_bank: right.right_bank,
            });
        } else {
            // Both pairs are destroyed; the outer memories stay blocked
            // until the failure news arrives at signal speed.
            let station = Self::bank_position(left.right_bank);
            self.block_until_news(left.left_bank, station, now);
            self.block_until_news(right.right_bank, station, now);
        }
    }

    fn block_until_news(&mut self, bank: u32, station_position: u64, now: u64) {
        let b = &mut self.banks[bank as usize];
        b.engaged -= 1;
        b.zombie += 1;
        let distance = station_position.abs_diff(Self::bank_position(bank));
        debug_assert!(distance >= 1 && distance < self.release_ring.len() as u64);
        let slot = ((now + distance) % self.release_ring.len() as u64) as usize;
        self.release_ring[slot].push(bank);
    }

    /// Assembles and fires ready cohorts: the oldest confirmed level-`m-1`
    /// pair of every segment, once all junction stations know about their
    /// neighbours.
    fn run_cohorts(&mut self, now: u64) {
        let top = self.depth - 1;
        let delay = Self::knowledge_delay(top);
        let segments = self.links >> top;
        loop {
            let mut latest_known = 0u64;
            let mut complete = true;
            for q in &self.queues[top as usize] {
                match q.front() {
                    Some(r) => latest_known = latest_known.max(r.created_cycle + delay),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if !complete || latest_known > now {
                return;
            }

            let mut cohort = core::mem::take(&mut self.cohort_scratch);
            cohort.clear();
            for q in &mut self.queues[top as usize] {
                cohort.push(q.pop_front().unwrap());
            }

            // All remaining swaps fire in this cycle: level-m junctions are
            // informed, higher junctions blind; the distinction only affects
            // which counter they land in.
            let mut all_ok = true;
            for junction in 1..segments as u32 {
                let level = self.depth + junction.trailing_zeros();
                if !self.count_bsm(level, now) {
                    all_ok = false;
                }
            }

            let mut age = 0u64;
            for record in &cohort {
                age += record.age_cycles(now);
                self.free_memory(record.left_bank);
                self.free_memory(record.right_bank);
            }

            if now >= self.warmup {
                self.trials += 1;
                if all_ok {
                    self.record_delivery(age, now);
                }
            }
            self.cohort_scratch = cohort;
        }
    }

    fn count_bsm(&mut self, level: u32, now: u64) -> bool {
        let success = self.rng.bernoulli(self.p_m);
        if now >= self.warmup {
            self.level_attempts[(level - 1) as usize] += 1;
            if success {
                self.level_successes[(level - 1) as usize] += 1;
            }
        }
        success
    }

    fn free_memory(&mut self, bank: u32) {
        let b = &mut self.banks[bank as usize];
        b.engaged -= 1;
        b.free += 1;
    }

    fn record_delivery(&mut self, age_cycles: u64, _now: u64) {
        self.delivered += 1;
        self.age_sum_cycles += age_cycles as u128;
        self.min_age = self.min_age.min(age_cycles);
        self.max_age = self.max_age.max(age_cycles);
        let age_s = age_cycles as f64 * self.t_ed;
        let fidelity = measures::fidelity_after(age_s, self.repeater.coherence_time)
            .expect("age and coherence time are valid by construction");
        self.ebit_sum += measures::measure_value(self.measure, fidelity)
            .expect("fidelity lies in [1/2, 1] by construction");
        if let Some(hist) = &mut self.histogram {
            *hist.entry(age_cycles).or_insert(0) += 1;
        }
    }

    fn launch_attempts(&mut self) {
        for link in 0..self.links {
            let (left, right) = (2 * link, 2 * link + 1);
            let count = self.banks[left].free.min(self.banks[right].free);
            if count > 0 {
                self.banks[left].free -= count;
                self.banks[left].attempting += count;
                self.banks[right].free -= count;
                self.banks[right].attempting += count;
                self.attempts_in_flight[link] = count;
            }
        }
    }

    /// Per-bank conservation audit: every memory is in exactly one state.
    #[cfg(debug_assertions)]
    fn audit(&self) {
        if self.banks.len() > 4096 {
            return;
        }
        for (i, b) in self.banks.iter().enumerate() {
            debug_assert_eq!(
                b.free + b.attempting + b.engaged + b.zombie,
                self.repeater.memories,
                "bank {i} lost a memory"
            );
        }
    }

    fn finish(mut self, config: &SimConfig) -> SimStats {
        #[cfg(debug_assertions)]
        {
            // Engaged memories must exactly match the queued pair ends.
            let queued: u64 = self
                .queues
                .iter()
                .flatten()
                .map(|q| q.len() as u64 * 2)
                .sum();
            let engaged: u64 = self.banks.iter().map(|b| b.engaged as u64).sum();
            debug_assert_eq!(queued, engaged);
        }
        let counted = config.cycles - config.warmup_cycles;
        let denominator =
            counted as f64 * self.t_ed * self.repeater.total_memories() as f64;
        let p_hat = if self.trials == 0 {
            0.0
        } else {
            self.delivered as f64 / self.trials as f64
        };
        let count_error = crate::math::sqrt(self.trials as f64 * p_hat * (1.0 - p_hat));
        if self.delivered == 0 {
            self.min_age = 0;
        }
        SimStats {
            config: config.clone(),
            prng: String::from(PRNG_ID),
            cycles_counted: counted,
            delivered_pairs: self.delivered,
            end_to_end_trials: self.trials,
            discarded_pairs: self.discarded,
            measured_normalized_rate: self.delivered as f64 / denominator,
            rate_standard_error: count_error / denominator,
            measured_ebit_rate: self.ebit_sum / denominator,
            mean_delivered_age_s: if self.delivered == 0 {
                0.0
            } else {
                (self.age_sum_cycles as f64 / self.delivered as f64) * self.t_ed
            },
            min_delivered_age_cycles: self.min_age,
            max_delivered_age_cycles: self.max_age,
            age_histogram_cycles: self.histogram,
            bsm_levels: self
                .level_attempts
                .iter()
                .zip(self.level_successes.iter())
                .enumerate()
                .map(|(i, (&attempts, &successes))| BsmLevelStats {
                    level: i as u32 + 1,
                    attempts,
                    successes,
                })
                .collect(),
        }
    }
}

/// Runs the protocol and aggregates post-warmup statistics.
pub fn run(config: &SimConfig) -> Result<SimStats> {
    let mut engine = Engine::new(config)?;
    for cycle in 0..config.cycles {
        engine.step(cycle);
    }
    Ok(engine.finish(config))
}

/// Measured-versus-analytic report for a finished run.
///
/// The analytic pair rate assumes every memory attempts every cycle, so the
/// measured ratio is at most one up to statistics; the gap is the occupancy
/// cost the closed form ignores. The ebit comparison uses the
/// no-purification rate, which is what the simulator implements.
pub fn compare_to_analytic(stats: &SimStats, config: &RepeaterConfig) -> Result<AnalyticComparison> {
    ensure!(
        *config == stats.config.repeater,
        "comparison config does not match the simulated config"
    );
    let analytic_pair_rate = rates::q_rate(config)?;
    let analytic_ebit_rate = rates::normalized_rate(
        config,
        rates::RateVariant::NoPurification,
        stats.config.measure,
    )?
    .r;
    let pair_rate_ratio = stats.measured_normalized_rate / analytic_pair_rate;
    let pair_rate_sigma = stats.rate_standard_error / analytic_pair_rate;
    let mean_measure = if stats.delivered_pairs == 0 {
        0.0
    } else {
        stats.measured_ebit_rate / stats.measured_normalized_rate
    };
    Ok(AnalyticComparison {
        analytic_pair_rate,
        pair_rate_ratio,
        pair_rate_sigma,
        analytic_ebit_rate,
        ebit_rate_ratio: stats.measured_ebit_rate / analytic_ebit_rate,
        ebit_rate_sigma: stats.rate_standard_error * mean_measure / analytic_ebit_rate,
    })
}
