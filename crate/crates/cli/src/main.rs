//! Batch front end: loads described sets, system definitions, and
//! waveform frames, runs the selected analysis, and emits reports,
//! matrices, plots, and a run manifest.

mod args;
mod commands;
mod manifest;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure modes mapped to exit codes: validation problems exit 2,
/// computation problems exit 3.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Computation(String),
}

impl Failure {
    fn computation<E: std::fmt::Display>(e: E) -> Self {
        Failure::Computation(e.to_string())
    }
}

pub type RunResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Distances(args) => commands::distances::run(&args),
        Command::Topology(args) => commands::topology::run(&args),
        Command::Dynamics(args) => commands::dynamics::run(&args),
        Command::Energy(args) => commands::energy::run(&args),
        Command::Selftest(args) => commands::selftest::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(report)) => {
            eprintln!("validation failed:\n{report}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
