//! `typicality`: exact finite-size typicality statistics of Haar-random
//! pure states, with a Monte Carlo cross-check.
//!
//! Exit status: 0 success, 2 invalid arguments, 3 dimensions outside the
//! regime a formula applies to, 4 strict-mode or acceptance failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{mc::McArgs, mi::MiArgs, report::ReportArgs, series::SeriesArgs, tails::TailsArgs};

#[derive(Debug, Parser)]
#[command(name = "typicality", version, about = "Typicality statistics of Haar-random pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact Beta law of a subsystem probability versus its matched Gaussian.
    Tails(TailsArgs),
    /// Typical mutual information I(A:B) of a tripartite Haar state.
    Mi(MiArgs),
    /// Term-by-term Bernoulli series for the mutual information.
    Series(SeriesArgs),
    /// Monte Carlo estimates next to their analytic targets.
    Mc(McArgs),
    /// Run the acceptance battery.
    Report(ReportArgs),
}

/// A command failure, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Regime(String),
    Check(String),
    Io(std::io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Regime(_) => 3,
            Failure::Check(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Regime(m) | Failure::Check(m) => f.write_str(m),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<typicality::Error> for Failure {
    fn from(e: typicality::Error) -> Self {
        match e {
            typicality::Error::Regime { .. } => Failure::Regime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tails(args) => commands::tails::run(&args),
        Command::Mi(args) => commands::mi::run(&args),
        Command::Series(args) => commands::series::run(&args),
        Command::Mc(args) => commands::mc::run(&args),
        Command::Report(args) => commands::report::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
