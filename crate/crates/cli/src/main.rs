//! `fade`: run benchmark problems, convergence studies, stability sweeps and
//! weight dumps.

mod args;
mod commands;
mod config_file;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use fade::FadeError;

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config file or parameter values (exit 2).
    Config(String),
    /// Solver or linear-algebra failure (exit 3).
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<FadeError> for CliError {
    fn from(e: FadeError) -> Self {
        match e {
            FadeError::InvalidGrid(_)
            | FadeError::SingularSpacing { .. }
            | FadeError::Domain { .. }
            | FadeError::LengthMismatch { .. }
            | FadeError::DimensionMismatch(_)
            | FadeError::UnknownProblem(_)
            | FadeError::IncompatibleScheme(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config_file::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("fade: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = commands::init_thread_pool() {
        eprintln!("fade: {e}");
        return ExitCode::from(e.exit_code());
    }
    let result = match cli.command {
        Command::Run(a) => commands::run(a),
        Command::Converge(a) => commands::converge(a),
        Command::Stability(a) => commands::stability(a),
        Command::Weights(a) => commands::weights(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fade: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
