//! `ising-traffic`: Max-Cut benchmarks, traffic assignment solves, fit
//! diagnostics, oracle checks and instance generators.

mod common;
mod fit_cmd;
mod gen_cmd;
mod maxcut_cmd;
mod oracle_cmd;
mod tap_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ising_traffic::config::RunConfig;

use common::{CliResult, Context, Failure};

const THREADS_VAR: &str = "ISING_TRAFFIC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "ising-traffic", version, about)]
struct Cli {
    /// Config file; keys it omits keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed; trial k uses seed + k.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per solver.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the effective configuration before running.
    #[arg(long, global = true)]
    show_config: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare the feedback and feedback-free networks on Max-Cut instances.
    Maxcut(maxcut_cmd::MaxcutArgs),
    /// Solve a traffic assignment instance with the selected solvers.
    Tap(tap_cmd::TapArgs),
    /// Fit a quadratic to one link's integrated cost.
    Fit(fit_cmd::FitArgs),
    /// Check solvers against the exhaustive ground state.
    Oracle(oracle_cmd::OracleArgs),
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: gen_cmd::GenKind,
    },
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("{THREADS_VAR}: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| Failure::from(e).context(p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.run.seed = s;
    }
    if let Some(t) = cli.trials {
        if t == 0 {
            return Err(Failure::usage("--trials must be at least 1"));
        }
        cfg.run.trials = t;
    }
    if cli.show_config {
        eprint!("{}", cfg.to_toml());
    }
    let ctx = Context { cfg, out: cli.out };
    match &cli.command {
        Command::Maxcut(a) => maxcut_cmd::run(&ctx, a),
        Command::Tap(a) => tap_cmd::run(&ctx, a),
        Command::Fit(a) => fit_cmd::run(&ctx, a),
        Command::Oracle(a) => oracle_cmd::run(&ctx, a),
        Command::Gen { kind } => gen_cmd::run(&ctx, kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
