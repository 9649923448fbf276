//! `repeater`: rates, optima and Monte-Carlo validation of nested
//! quantum-repeater chains with dephasing memories.
//!
//! Single results print as JSON on stdout, sweeps as CSV; diagnostics go to
//! stderr. Exit codes: 0 success, 1 runtime error, 2 usage error.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "repeater",
    version,
    about = "Entanglement rates of nested quantum-repeater chains with dephasing memories",
    after_help = "Lengths default to km (accepts e.g. 1000km, 5e5m); times default to ms \
                  (accepts us/ms/s). A JSON --config file may supply any flag; explicit \
                  flags override it."
)]
struct Cli {
    /// JSON file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the normalized rate of one configuration (JSON).
    Rate(RateArgs),
    /// Sweep one parameter, optimizing the rest per point (CSV).
    Sweep(SweepArgs),
    /// Exhaustive (n, m) optimization plus closed-form asymptotics (JSON).
    Optimize(OptimizeArgs),
    /// Closed-form asymptotic optima only (JSON).
    Asymptotics(AsymptoticsArgs),
    /// Monte-Carlo run of the cyclic protocol with analytic comparison (JSON).
    Simulate(SimulateArgs),
    /// Fit the optimized rate against sqrt(L) in the decay-limited regime (JSON).
    ScalingFit(ScalingFitArgs),
}

/// Physics flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
struct PhysicsArgs {
    /// Total distance L (km unless suffixed). Default 1000 km.
    #[arg(long = "L", value_name = "LENGTH")]
    length: Option<String>,
    /// BSM success probability P_M.
    #[arg(long)]
    pm: Option<f64>,
    /// Memory coherence time (ms unless suffixed).
    #[arg(long)]
    tauc: Option<String>,
    /// Channel signal speed, m/s. Default 2e8.
    #[arg(long)]
    c: Option<f64>,
    /// Attenuation length 1/alpha in km. Default 50.
    #[arg(long)]
    inv_alpha_km: Option<f64>,
    /// Prefactor of the elementary success model. Default 0.2.
    #[arg(long)]
    ps_prefactor: Option<f64>,
    /// Base-10 loss exponent per km of elementary link. Default 0.01.
    #[arg(long)]
    ps_exponent_per_km: Option<f64>,
    /// Fixed elementary success probability, overriding the distance model.
    #[arg(long)]
    ps: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct RateArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Nesting level n (0 for a single heralded link).
    #[arg(long)]
    n: Option<u32>,
    /// Informed-BSM depth m (1..=n; ignored for n = 0).
    #[arg(long)]
    m: Option<u32>,
    /// Protocol variant: ideal, nopur, pur or hashing.
    #[arg(long)]
    variant: Option<String>,
    /// Entanglement measure: ec or ed.
    #[arg(long)]
    measure: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Swept parameter: n, tauc, l or pm.
    #[arg(long)]
    param: Option<String>,
    /// Range start (same units as the corresponding flag).
    #[arg(long)]
    from: Option<String>,
    /// Range end, inclusive.
    #[arg(long)]
    to: Option<String>,
    /// Number of sweep points (ignored for n, which steps by 1).
    #[arg(long, default_value_t = 10)]
    steps: usize,
    /// Point spacing: linear or log.
    #[arg(long, default_value = "linear")]
    spacing: String,
    /// Protocol variant: ideal, nopur, pur or hashing.
    #[arg(long)]
    variant: Option<String>,
    /// Entanglement measure: ec or ed.
    #[arg(long)]
    measure: Option<String>,
    /// Largest nesting level searched.
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct OptimizeArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Protocol variant: ideal, nopur, pur or hashing.
    #[arg(long)]
    variant: Option<String>,
    /// Entanglement measure: ec or ed.
    #[arg(long)]
    measure: Option<String>,
    /// Largest nesting level searched.
    #[arg(long)]
    n_max: Option<u32>,
    /// Omit the per-point grid table from the output.
    #[arg(long)]
    no_table: bool,
}

#[derive(Args, Debug, Clone)]
struct AsymptoticsArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
}

#[derive(Args, Debug, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Nesting level n.
    #[arg(long)]
    n: Option<u32>,
    /// Informed-BSM depth m.
    #[arg(long)]
    m: Option<u32>,
    /// Memories per bank N.
    #[arg(long = "N")]
    memories: Option<u32>,
    /// Number of T_ED cycles to simulate.
    #[arg(long)]
    cycles: Option<u64>,
    /// Leading cycles excluded from statistics.
    #[arg(long)]
    warmup: Option<u64>,
    /// PRNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Entanglement measure for the delivered-ebit mapping: ec or ed.
    #[arg(long)]
    measure: Option<String>,
    /// Skip the delivered-age histogram.
    #[arg(long)]
    no_age_histogram: bool,
}

#[derive(Args, Debug, Clone)]
struct ScalingFitArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Smallest distance of the fit range (km unless suffixed).
    #[arg(long)]
    l_from: Option<String>,
    /// Largest distance of the fit range.
    #[arg(long)]
    l_to: Option<String>,
    /// Number of log-spaced distances.
    #[arg(long, default_value_t = 12)]
    points: usize,
    /// Protocol variant: ideal, nopur, pur or hashing.
    #[arg(long)]
    variant: Option<String>,
    /// Entanglement measure: ec or ed.
    #[arg(long)]
    measure: Option<String>,
}

/// Missing or malformed values that should exit like a CLI misuse.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn require<T>(value: Option<T>, what: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| {
        anyhow::Error::new(UsageError(format!(
            "missing required value: {what} (set the flag or a config-file entry)"
        )))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match config::FileConfig::load(cli.config.as_deref()) {
        Ok(file) => file,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Rate(args) => commands::rate(&file, &args),
        Command::Sweep(args) => commands::sweep(&file, &args),
        Command::Optimize(args) => commands::optimize(&file, &args),
        Command::Asymptotics(args) => commands::asymptotics(&file, &args),
        Command::Simulate(args) => commands::simulate(&file, &args),
        Command::ScalingFit(args) => commands::scaling_fit(&file, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if err.is::<UsageError>() => {
            eprintln!("error: {err}");
            eprintln!("run `repeater --help` for usage");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
