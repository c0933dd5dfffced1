//! Library side of the `coulomb` binary. Every subcommand is a function from a
//! merged [`RunConfig`] to rendered output, so the commands can be driven
//! in-process as well as through the executable.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod format;
pub mod verify;

use thiserror::Error;

pub use args::{Cli, Command};
pub use config::{OutputFormat, RunConfig};

/// Failure of a subcommand, one variant per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("spectral point: {0}")]
    SpectralPoint(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 2,
            CliError::SpectralPoint(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

impl From<coulomb_core::Error> for CliError {
    fn from(e: coulomb_core::Error) -> Self {
        use coulomb_core::Error as E;
        match e {
            E::Parameter(_) => CliError::Input(e.to_string()),
            E::SpectralPoint { .. } => CliError::SpectralPoint(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: the main document and optional warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub warnings: Vec<String>,
}

/// Runs one parsed invocation, writing output where the config says.
pub fn run(cli: Cli) -> CliResult<Rendered> {
    let (cfg, command) = cli.into_config()?;
    let rendered = commands::dispatch(&command, &cfg)?;
    emit(&cfg, &rendered)?;
    Ok(rendered)
}

fn emit(cfg: &RunConfig, r: &Rendered) -> CliResult<()> {
    use std::io::Write;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &r.body)?;
            if !r.warnings.is_empty() {
                let mut side = path.clone().into_os_string();
                side.push(".warnings");
                std::fs::write(side, r.warnings.join("\n") + "\n")?;
            }
        }
        None => {
            std::io::stdout().write_all(r.body.as_bytes())?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(())
}
