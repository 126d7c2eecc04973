//! Batch experiment runner over the nodal-lab library.
//!
//! Every command writes a CSV table (or a JSON document) whose header carries
//! the SHA-256 of the effective configuration, and prints a one-line summary
//! on stderr. Exit codes: 0 success, 2 invalid input, 3 budget or
//! convergence failure (outputs still written and flagged), 1 i/o.

mod args;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{eigen, kacrice, lattice, loglab, measure, nodal, rwm};
use config::{validation, CliResult, Ctx};
use output::Outcome;

const THREADS_ENV: &str = "NODAL_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "nodal-lab",
    version,
    about = "Nodal length experiments on the flat torus"
)]
struct Cli {
    /// JSON object of command parameters; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (default: NODAL_LAB_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write a JSON summary here.
    #[arg(long, global = true, value_name = "FILE")]
    summary: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice points and additive correlations.
    #[command(subcommand)]
    Lattice(lattice::LatticeCmd),
    /// Eigenfunction specs.
    #[command(subcommand)]
    Eigen(eigen::EigenCmd),
    /// Nodal length measurements.
    #[command(subcommand)]
    Nodal(nodal::NodalCmd),
    /// Spectral measures on the circle.
    #[command(subcommand)]
    Measure(measure::MeasureCmd),
    /// Gaussian random waves.
    #[command(subcommand)]
    Rwm(rwm::RwmCmd),
    /// Kac-Rice constants.
    #[command(subcommand)]
    Kacrice(kacrice::KacRiceCmd),
    /// Log-integrability and Planck-scale length statistics.
    #[command(subcommand)]
    Loglab(loglab::LogLabCmd),
}

fn thread_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| validation(format!("{THREADS_ENV}={v:?} is not an integer")))?,
            Err(_) => return Ok(None),
        },
    };
    if n == 0 {
        return Err(validation("thread count must be at least 1"));
    }
    Ok(Some(n))
}

fn run(cli: &Cli) -> CliResult<i32> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| config::CliError::Internal(e.to_string()))?;
    }
    let ctx = Ctx::load(cli.config.as_deref())?;
    let outcome: Outcome = match &cli.command {
        Command::Lattice(c) => lattice::run(c, &ctx)?,
        Command::Eigen(c) => eigen::run(c, &ctx)?,
        Command::Nodal(c) => nodal::run(c, &ctx)?,
        Command::Measure(c) => measure::run(c, &ctx)?,
        Command::Rwm(c) => rwm::run(c, &ctx)?,
        Command::Kacrice(c) => kacrice::run(c, &ctx)?,
        Command::Loglab(c) => loglab::run(c, &ctx)?,
    };
    output::write(&outcome, cli.out.as_deref(), cli.summary.as_deref())?;
    Ok(outcome.report.status.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nodal-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
