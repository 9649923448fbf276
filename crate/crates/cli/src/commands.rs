//! Subcommand implementations.

use anyhow::{bail, Context, Result};
use repeater_core::optimize::{
    asymptotic_l0_opt, asymptotic_m_opt, optimize as grid_optimize, scaling_fit as fit_scaling,
    OptimizationResult, Physics,
};
use repeater_core::rates::normalized_rate;
use repeater_core::sim::{compare_to_analytic, run as run_sim, AnalyticComparison, SimConfig, SimStats};
use repeater_core::{MeasureKind, RateResult, RateVariant, RepeaterConfig};
use serde::Serialize;

use crate::config::{
    build_channel, parse_length, parse_measure, parse_num_or_str, parse_time, parse_variant,
    FileConfig,
};
use crate::{require, AsymptoticsArgs, OptimizeArgs, PhysicsArgs, RateArgs, ScalingFitArgs,
    SimulateArgs, SweepArgs, UsageError};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Physics values with the per-command required checks still pending.
struct PartialPhysics {
    length: f64,
    bsm_success: Option<f64>,
    coherence_time: Option<f64>,
    channel: repeater_core::ChannelModel,
}

impl PartialPhysics {
    fn require_all(&self) -> Result<ResolvedPhysics> {
        let bsm_success = require(self.bsm_success, "--pm")?;
        let coherence_time = require(self.coherence_time, "--tauc")?;
        Ok(ResolvedPhysics {
            length: self.length,
            bsm_success,
            coherence_time,
            physics: Physics {
                bsm_success,
                coherence_time,
                channel: self.channel,
            },
        })
    }
}

/// Resolved physics shared by all commands.
struct ResolvedPhysics {
    length: f64,
    bsm_success: f64,
    coherence_time: f64,
    physics: Physics,
}

fn resolve_partial(file: &FileConfig, args: &PhysicsArgs) -> Result<PartialPhysics> {
    let length = match (&args.length, &file.length) {
        (Some(s), _) => parse_length(s)?,
        (None, Some(v)) => parse_num_or_str(v, parse_length, 1.0e3)?,
        (None, None) => 1.0e6,
    };
    let coherence_time = match (&args.tauc, &file.tauc) {
        (Some(s), _) => Some(parse_time(s)?),
        (None, Some(v)) => Some(parse_num_or_str(v, parse_time, 1.0e-3)?),
        (None, None) => None,
    };
    let channel = build_channel(
        file,
        args.c,
        args.inv_alpha_km,
        args.ps_prefactor,
        args.ps_exponent_per_km,
        args.ps,
    );
    Ok(PartialPhysics {
        length,
        bsm_success: args.pm.or(file.pm),
        coherence_time,
        channel,
    })
}

fn resolve_physics(file: &FileConfig, args: &PhysicsArgs) -> Result<ResolvedPhysics> {
    resolve_partial(file, args)?.require_all()
}

fn resolve_variant(flag: &Option<String>, file: &FileConfig) -> Result<RateVariant> {
    match flag.as_deref().or(file.variant.as_deref()) {
        Some(s) => parse_variant(s).map_err(|e| usage(e.to_string())),
        None => Ok(RateVariant::WithPurification),
    }
}

fn resolve_measure(flag: &Option<String>, file: &FileConfig) -> Result<MeasureKind> {
    match flag.as_deref().or(file.measure.as_deref()) {
        Some(s) => parse_measure(s).map_err(|e| usage(e.to_string())),
        None => Ok(MeasureKind::EntanglementCost),
    }
}

/// Writes a line to stdout; a closed pipe (e.g. `| head`) ends the program
/// quietly instead of panicking.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other.context("cannot write to stdout"),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct RateOutput {
    config: RepeaterConfig,
    measure: MeasureKind,
    result: RateResult,
}

pub fn rate(file: &FileConfig, args: &RateArgs) -> Result<()> {
    let resolved = resolve_physics(file, &args.physics)?;
    let n = require(args.n.or(file.n), "--n")?;
    let m = if n == 0 {
        args.m.or(file.m).unwrap_or(0)
    } else {
        require(args.m.or(file.m), "--m")?
    };
    let config = RepeaterConfig {
        length: resolved.length,
        nesting: n,
        informed_depth: m,
        memories: 1,
        bsm_success: resolved.bsm_success,
        coherence_time: resolved.coherence_time,
        channel: resolved.physics.channel,
    };
    let variant = resolve_variant(&args.variant, file)?;
    let measure = resolve_measure(&args.measure, file)?;
    let result = normalized_rate(&config, variant, measure)?;
    print_json(&RateOutput {
        config,
        measure,
        result,
    })
}

const SWEEP_HEADER: &str = "param,n_opt,m_opt,q,decay_time_s,measure_value,rate_per_memory_per_s";

fn sweep_values(from: f64, to: f64, steps: usize, spacing: &str) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    match spacing {
        "linear" => {
            let step = (to - from) / (steps - 1) as f64;
            Ok((0..steps).map(|i| from + step * i as f64).collect())
        }
        "log" => {
            if from <= 0.0 || to <= 0.0 {
                return Err(usage("log spacing needs positive endpoints"));
            }
            let step = (to / from).ln() / (steps - 1) as f64;
            Ok((0..steps).map(|i| from * (step * i as f64).exp()).collect())
        }
        other => Err(usage(format!("unknown spacing {other:?} (linear, log)"))),
    }
}

fn emit_row(param: f64, n: u32, m: u32, rate: &RateResult) -> Result<()> {
    emit(&format!(
        "{param},{n},{m},{},{},{},{}",
        rate.q, rate.effective_decay_time, rate.measure_value, rate.r
    ))
}

/// Best informed depth at a fixed nesting level; ties go to the smaller m.
fn best_depth_at(
    length: f64,
    physics: &Physics,
    n: u32,
    variant: RateVariant,
    measure: MeasureKind,
) -> Result<(u32, RateResult)> {
    let mut best: Option<(u32, RateResult)> = None;
    for m in 1..=n {
        let result = normalized_rate(&physics.config(length, n, m), variant, measure)?;
        if best.as_ref().is_none_or(|(_, b)| result.r > b.r) {
            best = Some((m, result));
        }
    }
    Ok(best.expect("n >= 1 grid is non-empty"))
}

pub fn sweep(file: &FileConfig, args: &SweepArgs) -> Result<()> {
    let partial = resolve_partial(file, &args.physics)?;
    let variant = resolve_variant(&args.variant, file)?;
    let measure = resolve_measure(&args.measure, file)?;
    let n_max = args.n_max.or(file.n_max).unwrap_or(24);
    let param = require(args.param.as_deref(), "--param")?;
    let from = require(args.from.as_deref(), "--from")?;
    let to = require(args.to.as_deref(), "--to")?;
    // The swept parameter needs no fixed value; everything else does.
    let resolved = match param {
        "tauc" => PartialPhysics {
            coherence_time: partial.coherence_time.or(Some(1.0)),
            ..partial
        }
        .require_all()?,
        "pm" => PartialPhysics {
            bsm_success: partial.bsm_success.or(Some(1.0)),
            ..partial
        }
        .require_all()?,
        _ => partial.require_all()?,
    };

    emit(SWEEP_HEADER)?;
    match param {
        // Fixed nesting level, optimized over the informed depth. The param
        // column is the nesting level itself.
        "n" => {
            let (from, to): (u32, u32) = (
                from.parse().context("--from must be an integer for an n sweep")?,
                to.parse().context("--to must be an integer for an n sweep")?,
            );
            if from < 1 || to < from {
                return Err(usage("an n sweep needs 1 <= from <= to"));
            }
            for n in from..=to {
                let (m, result) =
                    best_depth_at(resolved.length, &resolved.physics, n, variant, measure)?;
                emit_row(n as f64, n, m, &result)?;
            }
        }
        // Swept coherence time in seconds, optimized over (n, m).
        "tauc" => {
            let range = sweep_values(parse_time(from)?, parse_time(to)?, args.steps, &args.spacing)?;
            for tau in range {
                let physics = Physics {
                    coherence_time: tau,
                    ..resolved.physics
                };
                let opt = grid_optimize(resolved.length, &physics, variant, measure, n_max)?;
                let result = normalized_rate(
                    &physics.config(resolved.length, opt.n_opt, opt.m_opt),
                    variant,
                    measure,
                )?;
                emit_row(tau, opt.n_opt, opt.m_opt, &result)?;
            }
        }
        // Swept total distance in meters, optimized over (n, m).
        "l" => {
            let range =
                sweep_values(parse_length(from)?, parse_length(to)?, args.steps, &args.spacing)?;
            for length in range {
                let opt = grid_optimize(length, &resolved.physics, variant, measure, n_max)?;
                let result = normalized_rate(
                    &resolved.physics.config(length, opt.n_opt, opt.m_opt),
                    variant,
                    measure,
                )?;
                emit_row(length, opt.n_opt, opt.m_opt, &result)?;
            }
        }
        // Swept BSM success probability, optimized over (n, m).
        "pm" => {
            let range = sweep_values(
                from.parse().context("--from must be a probability")?,
                to.parse().context("--to must be a probability")?,
                args.steps,
                &args.spacing,
            )?;
            for pm in range {
                let physics = Physics {
                    bsm_success: pm,
                    ..resolved.physics
                };
                let opt = grid_optimize(resolved.length, &physics, variant, measure, n_max)?;
                let result = normalized_rate(
                    &physics.config(resolved.length, opt.n_opt, opt.m_opt),
                    variant,
                    measure,
                )?;
                emit_row(pm, opt.n_opt, opt.m_opt, &result)?;
            }
        }
        other => return Err(usage(format!("unknown sweep parameter {other:?} (n, tauc, l, pm)"))),
    }
    Ok(())
}

#[derive(Serialize)]
struct Asymptotics {
    l0_opt_m: f64,
    /// log2 of the predicted optimal 2^m.
    m_opt_log2: f64,
    m_opt_rounded: i64,
    predicted_slope_per_sqrt_m: f64,
}

#[derive(Serialize)]
#[serde(untagged)]
enum AsymptoticsBlock {
    Ok(Asymptotics),
    Degenerate { error: String },
}

fn asymptotics_for(resolved: &ResolvedPhysics) -> AsymptoticsBlock {
    let channel = resolved.physics.channel;
    let l0 = asymptotic_l0_opt(resolved.bsm_success, channel.alpha);
    let m = asymptotic_m_opt(
        resolved.length,
        resolved.bsm_success,
        resolved.coherence_time,
        channel.speed,
        channel.alpha,
    );
    match (l0, m) {
        (Ok(l0_opt_m), Ok(m_opt_log2)) => AsymptoticsBlock::Ok(Asymptotics {
            l0_opt_m,
            m_opt_log2,
            m_opt_rounded: m_opt_log2.round() as i64,
            predicted_slope_per_sqrt_m: 2.0
                * (f64::ln(1.0 / resolved.bsm_success)
                    / (channel.speed * resolved.coherence_time))
                    .sqrt(),
        }),
        (Err(e), _) | (_, Err(e)) => AsymptoticsBlock::Degenerate {
            error: e.to_string(),
        },
    }
}

#[derive(Serialize)]
struct OptimizeOutput {
    #[serde(rename = "length_m")]
    length: f64,
    variant: RateVariant,
    measure: MeasureKind,
    grid: OptimizationResult,
    asymptotics: AsymptoticsBlock,
}

pub fn optimize(file: &FileConfig, args: &OptimizeArgs) -> Result<()> {
    let resolved = resolve_physics(file, &args.physics)?;
    let variant = resolve_variant(&args.variant, file)?;
    let measure = resolve_measure(&args.measure, file)?;
    let n_max = args.n_max.or(file.n_max).unwrap_or(24);
    let mut grid = grid_optimize(resolved.length, &resolved.physics, variant, measure, n_max)?;
    if args.no_table {
        grid.table.clear();
    }
    print_json(&OptimizeOutput {
        length: resolved.length,
        variant,
        measure,
        asymptotics: asymptotics_for(&resolved),
        grid,
    })
}

pub fn asymptotics(file: &FileConfig, args: &AsymptoticsArgs) -> Result<()> {
    let resolved = resolve_physics(file, &args.physics)?;
    match asymptotics_for(&resolved) {
        AsymptoticsBlock::Ok(out) => print_json(&out),
        AsymptoticsBlock::Degenerate { error } => bail!("asymptotics are degenerate: {error}"),
    }
}

#[derive(Serialize)]
struct SimulateOutput {
    stats: SimStats,
    comparison: AnalyticComparison,
}

pub fn simulate(file: &FileConfig, args: &SimulateArgs) -> Result<()> {
    let resolved = resolve_physics(file, &args.physics)?;
    let n = require(args.n.or(file.n), "--n")?;
    let m = if n == 0 {
        args.m.or(file.m).unwrap_or(0)
    } else {
        require(args.m.or(file.m), "--m")?
    };
    let config = SimConfig {
        repeater: RepeaterConfig {
            length: resolved.length,
            nesting: n,
            informed_depth: m,
            memories: require(args.memories.or(file.memories), "--N")?,
            bsm_success: resolved.bsm_success,
            coherence_time: resolved.coherence_time,
            channel: resolved.physics.channel,
        },
        cycles: require(args.cycles.or(file.cycles), "--cycles")?,
        warmup_cycles: args.warmup.or(file.warmup).unwrap_or(0),
        seed: require(args.seed.or(file.seed), "--seed")?,
        track_ages: !args.no_age_histogram && file.track_ages.unwrap_or(true),
        measure: resolve_measure(&args.measure, file)?,
    };
    let stats = run_sim(&config)?;
    let comparison = compare_to_analytic(&stats, &config.repeater)?;
    print_json(&SimulateOutput { stats, comparison })
}

pub fn scaling_fit(file: &FileConfig, args: &ScalingFitArgs) -> Result<()> {
    let resolved = resolve_physics(file, &args.physics)?;
    let variant = resolve_variant(&args.variant, file)?;
    let measure = resolve_measure(&args.measure, file)?;
    let from = parse_length(require(args.l_from.as_deref(), "--l-from")?)?;
    let to = parse_length(require(args.l_to.as_deref(), "--l-to")?)?;
    if args.points < 6 {
        return Err(usage("--points must be at least 6"));
    }
    let step = (to / from).ln() / (args.points - 1) as f64;
    let lengths: Vec<f64> = (0..args.points)
        .map(|i| from * (step * i as f64).exp())
        .collect();
    let fit = fit_scaling(&resolved.physics, variant, measure, &lengths)?;
    print_json(&fit)
}
