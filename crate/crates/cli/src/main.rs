//! `fracmod`: run the verification suite, parameter sweeps and single
//! transforms from the command line.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};
use error::{CliError, EXIT_FAILED_CHECKS};

#[derive(Debug, Parser)]
#[command(name = "fracmod", version, about = "Fractional operators, moduli of continuity and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full acceptance suite; exits 1 if any criterion fails.
    Verify(Flags),
    /// Cross parameter lists for one family of checks (--cmd).
    Sweep(Flags),
    /// Riemann-Liouville integral of --f on [0, 1].
    Fracint(Flags),
    /// Riemann-Liouville derivative of --f on [0, 1].
    Fracder(Flags),
    /// Riesz potential of --f on [-2, 2]^d.
    Riesz(Flags),
    /// Modulus-of-continuity profile of --f on [0, 1].
    Modulus(Flags),
    /// Re-render a stored JSON run (--input) as CSV.
    Report(Flags),
}

/// Caps the worker pool at `FRACMOD_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FRACMOD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FRACMOD_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (flags, job): (Flags, fn(&RunConfig) -> Result<commands::Artifact, CliError>) = match cli.command {
        Command::Verify(f) => (f, commands::verify),
        Command::Sweep(f) => (f, commands::sweep),
        Command::Fracint(f) => (f, commands::fracint),
        Command::Fracder(f) => (f, commands::fracder),
        Command::Riesz(f) => (f, commands::riesz),
        Command::Modulus(f) => (f, commands::modulus),
        Command::Report(f) => (f, commands::report),
    };
    let cfg = RunConfig::resolve(flags)?;
    let artifact = job(&cfg)?;
    output::emit(cfg.out.as_deref(), &artifact.bytes)?;
    Ok(artifact.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECKS),
        Err(e) => {
            eprintln!("fracmod: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
