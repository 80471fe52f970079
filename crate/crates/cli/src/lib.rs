//! Command-line driver: reads a TOML run configuration, runs one of the
//! `solve`, `figure`, `sweep` or `simulate` commands, and writes a flat
//! `key=value` result file or a CSV table.

pub mod commands;
pub mod config;
pub mod output;

use thiserror::Error;

/// Failures grouped by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration, unwritable output.
    #[error("{0}")]
    Usage(String),
    /// The model was well posed but the numerics failed.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<disclosure::Error> for CliError {
    fn from(e: disclosure::Error) -> Self {
        match e {
            disclosure::Error::InvalidParam { .. } | disclosure::Error::DegenerateConflict => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
