//! `thermest`: bounds, Monte Carlo experiments and Fock-space oracle checks
//! for displaced thermal states.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or input error,
//! 3 mathematical-domain error.

mod bounds_cmd;
mod manifest;
mod oracle_cmd;
mod point;
mod simulate_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermest_core::Error;

#[derive(Parser)]
#[command(
    name = "thermest",
    version,
    about = "Cramér-Rao bounds and estimators for displaced thermal states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the RLD bound by the general formula and in closed form.
    Bounds(bounds_cmd::BoundsArgs),
    /// Monte Carlo estimate of the weighted MSE of a protocol.
    Simulate(simulate_cmd::SimulateArgs),
    /// Check the analytic measurement laws, concentration and RLD matrices
    /// against truncated Fock-space matrices.
    OracleCheck(oracle_cmd::OracleArgs),
}

/// Output options shared by all commands.
#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Machine-readable JSON output.
    #[arg(long)]
    pub json: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    CheckFailed(Vec<String>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(Error::Parse(_) | Error::Io(_) | Error::Cutoff { .. }) => 2,
            CliError::Core(Error::Domain(_) | Error::Numerical(_)) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::CheckFailed(names) => format!("failing checks: {}", names.join(", ")),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Writes `text` to `--out` or stdout.
pub fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(args) => bounds_cmd::run(args),
        Command::Simulate(args) => simulate_cmd::run(args),
        Command::OracleCheck(args) => oracle_cmd::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermest: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
