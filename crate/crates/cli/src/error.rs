use std::io;

use clustagree::{ExtremalError, IndexError, OracleError, TableError};
use thiserror::Error;

use crate::report::RunReport;

/// Failures of a subcommand, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Unsupported(String),
    /// Enumeration ran out of budget; carries whatever was computed before.
    #[error("{message}")]
    Budget {
        message: String,
        partial: Box<RunReport>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Unsupported(_) => 3,
            CliError::Budget { .. } => 4,
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::Unsupported { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
