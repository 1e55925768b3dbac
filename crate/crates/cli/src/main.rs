//! `ptsusy`: build SUSY partners of the trigonometric Pöschl-Teller
//! potential from a JSON job file, sample them, and check their spectra.
//!
//! Exit codes: 0 success, 1 I/O, 2 invalid input, 3 construction failure,
//! 4 verification failure.

mod config;
mod figures;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::JobConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Construction(String),
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Construction(_) => 3,
            CliError::VerificationFailed => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ptsusy",
    version,
    about = "SUSY partners of the Pöschl-Teller potential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write potential samples, the predicted spectrum and optional
    /// eigenfunctions for one job.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the predicted spectrum with the finite-difference oracle.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of oracle levels.
        #[arg(long)]
        levels: Option<usize>,
        /// Number of oracle grid intervals.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Write the figure datasets and a manifest.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { config, out } => job::generate(&JobConfig::load(&config)?, &out),
        Command::Verify {
            config,
            out,
            levels,
            grid,
        } => job::verify(&JobConfig::load(&config)?, &out, levels, grid),
        Command::Figures { out } => figures::write_all(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Io(_) => "i/o error",
                CliError::Validation(_) => "invalid input",
                CliError::Construction(_) => "construction failed",
                CliError::VerificationFailed => "verification",
            };
            eprintln!("ptsusy: {kind}: {e}");
            ExitCode::from(e.code())
        }
    }
}
