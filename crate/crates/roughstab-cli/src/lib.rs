//! Scenario front end for the roughstab toolkit.
//!
//! Subcommands: `simulate`, `lift`, `limit`, `lyapunov`, `figures`,
//! `converge`, `compare`. Each reads an optional scenario file
//! (`key = value` lines) plus flag overrides, writes CSV datasets and a
//! digest manifest into the output directory, and reports through its exit
//! code: 0 success, 2 blow-up, 3 invalid configuration, 4 non-monotone
//! convergence. `ROUGHSTAB_THREADS` caps the worker pool.

pub mod manifest;
pub mod runner;
pub mod scenario;

use clap::{Args, Parser, Subcommand};
use scenario::Scenario;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("blow-up: {0}")]
    BlowUp(String),
    #[error("convergence table is not strictly decreasing")]
    NonMonotone,
}

impl From<roughstab::dynamics::DynamicsError> for CliError {
    fn from(e: roughstab::dynamics::DynamicsError) -> Self {
        use roughstab::dynamics::DynamicsError::*;
        match e {
            BlowUp { .. } | NumericalFailure { .. } => CliError::BlowUp(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 3,
            CliError::BlowUp(_) => 2,
            CliError::NonMonotone => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "roughstab",
    version,
    about = "Level-2 rough path simulation and stability verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Scenario file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Override the scenario seed (Wiener driver and ensembles).
    #[arg(long)]
    seed: Option<u64>,
    /// Override the oscillatory frequency index.
    #[arg(long)]
    eta: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lyapunov grid `directions,shells,r_min,r_max`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate the scenario and emit trajectory data.
    Simulate(CommonArgs),
    /// Lift a sampled signal to its level-2 rough path.
    Lift(LiftArgs),
    /// Emit the driver's limit rate matrix and limit trajectory.
    Limit(CommonArgs),
    /// Grid-certified stability analysis of the limit system.
    Lyapunov(CommonArgs),
    /// Reproduce the case-study figure datasets.
    Figures(CommonArgs),
    /// Sup-norm convergence study over the scenario's eta sweep.
    Converge(CommonArgs),
    /// Deterministic versus stochastic excursions from the origin.
    Compare(CommonArgs),
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Input signal CSV (`t,x1,...,xn`); defaults to the scenario driver.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn load_scenario(args: &CommonArgs) -> Result<Scenario, CliError> {
    let mut s = match &args.scenario {
        Some(path) => Scenario::from_file(path)?,
        None => Scenario::default(),
    };
    if let Some(seed) = args.seed {
        if let scenario::DriverSpec::Wiener { seed: ref mut sd, .. } = s.driver {
            *sd = seed;
        }
        s.seeds = (seed..seed + s.seeds.len().max(1) as u64).collect();
    }
    if let Some(eta) = args.eta {
        if let scenario::DriverSpec::Oscillatory { eta: ref mut e, .. } = s.driver {
            *e = eta;
        } else {
            return Err(CliError::Config(
                "--eta applies to oscillatory drivers only".into(),
            ));
        }
    }
    if let Some(out) = &args.out {
        s.out = out.clone();
    }
    if let Some(grid) = &args.grid {
        s.grid = scenario::parse_grid(grid)?;
    }
    s.validate()?;
    Ok(s)
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("ROUGHSTAB_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                // a second call in the same process keeps the first pool
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => {
            runner::simulate(&load_scenario(&a)?)?;
        }
        Command::Lift(a) => {
            runner::lift(&load_scenario(&a.common)?, a.input.as_deref())?;
        }
        Command::Limit(a) => {
            runner::limit(&load_scenario(&a)?)?;
        }
        Command::Lyapunov(a) => {
            runner::lyapunov_analysis(&load_scenario(&a)?)?;
        }
        Command::Figures(a) => {
            runner::figures(&load_scenario(&a)?)?;
        }
        Command::Converge(a) => {
            let (outcome, _) = runner::converge(&load_scenario(&a)?)?;
            if !outcome.monotone {
                return Err(CliError::NonMonotone);
            }
        }
        Command::Compare(a) => {
            runner::compare(&load_scenario(&a)?)?;
        }
    }
    Ok(())
}

/// Parses argv and runs the selected command, returning the process exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version itself with code 0
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("roughstab: {e}");
            e.exit_code()
        }
    }
}
