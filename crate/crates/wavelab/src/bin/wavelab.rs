//! Thin command-line shell over the experiment harness.
//!
//! Exit status: 0 when the experiment ran and passed, 1 when it ran and
//! failed (probe violation, lost contraction, stalled continuation, blown-up
//! state), 2 when the run never started (bad flags, unreadable or invalid
//! configuration).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wavelab::config::{default_config, load_config, RunConfig};
use wavelab::harness::{run, RunFailure, RunOutput};

#[derive(Parser)]
#[command(
    name = "wavelab",
    version,
    about = "Pseudospectral laboratory for a weighted semilinear wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact exponent report: hypothesis checks, time-gain exponents,
    /// contraction pairs with identity verification
    #[command(name = "check-exponents")]
    CheckExponents(CheckArgs),
    /// Reference leapfrog integration with energy tracking
    Simulate(RunArgs),
    /// Picard fixed-point iteration on one interval
    Picard(RunArgs),
    /// Interval-chaining continuation toward a time horizon
    #[command(name = "continue")]
    Continue(RunArgs),
    /// Tabulate the standard norms of the configured data
    Norms(RunArgs),
    /// Randomized bounded-ratio probe of one inequality
    Probe(RunArgs),
    /// Picard runs across a halving interval sweep
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file (section.key = value lines)
    #[arg(long)]
    config: PathBuf,
    /// Output root directory (overrides output.dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sampling seed (overrides probes.seed)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CheckArgs {
    /// Optional configuration file supplying defaults for the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output root directory (overrides output.dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Nonlinearity power (rational, e.g. 7/6 or 0.5)
    #[arg(long)]
    alpha: Option<String>,
    /// Weight decay exponent (rational)
    #[arg(long)]
    b: Option<String>,
    /// Working regularity order (rational)
    #[arg(long)]
    s: Option<String>,
    /// Auxiliary Lebesgue exponent (rational)
    #[arg(long)]
    gamma: Option<String>,
    /// Hypothesis regime to validate: t1.1, t1.2 or t1.3
    #[arg(long)]
    theorem: Option<String>,
}

fn load(path: &PathBuf) -> Result<RunConfig, RunFailure> {
    load_config(path).map_err(|e| RunFailure::Config(e.to_string()))
}

fn check_exponents_config(args: &CheckArgs) -> Result<RunConfig, RunFailure> {
    let base = match &args.config {
        Some(path) => load(path)?,
        None => default_config(),
    };
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut push = |key: &str, value: &Option<String>| {
        if let Some(v) = value {
            overrides.push((key.to_string(), v.clone()));
        }
    };
    push("eq.alpha", &args.alpha);
    push("eq.b", &args.b);
    push("eq.s", &args.s);
    push("eq.gamma", &args.gamma);
    push("eq.theorem", &args.theorem);
    if args.config.is_none() && args.b.is_some() && args.gamma.is_none() {
        // Pure flag invocation with a new weight exponent: re-derive the
        // default auxiliary exponent instead of keeping the stale one.
        overrides.push(("eq.gamma".to_string(), String::new()));
    }
    base.with_overrides(&overrides).map_err(|e| RunFailure::Config(e.to_string()))
}

fn dispatch(cli: &Cli) -> Result<RunOutput, RunFailure> {
    let (name, cfg, out, seed) = match &cli.command {
        Command::CheckExponents(args) => {
            ("check-exponents", check_exponents_config(args)?, args.out.clone(), None)
        }
        Command::Simulate(args) => ("simulate", load(&args.config)?, args.out.clone(), args.seed),
        Command::Picard(args) => ("picard", load(&args.config)?, args.out.clone(), args.seed),
        Command::Continue(args) => ("continue", load(&args.config)?, args.out.clone(), args.seed),
        Command::Norms(args) => ("norms", load(&args.config)?, args.out.clone(), args.seed),
        Command::Probe(args) => ("probe", load(&args.config)?, args.out.clone(), args.seed),
        Command::Sweep(args) => ("sweep", load(&args.config)?, args.out.clone(), args.seed),
    };
    run(name, &cfg, out.as_deref(), seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(output) => {
            println!("{}", output.summary);
            println!("run directory: {}", output.dir.display());
            ExitCode::from(output.exit_code as u8)
        }
        Err(failure) => {
            eprintln!("wavelab: {}", failure);
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
