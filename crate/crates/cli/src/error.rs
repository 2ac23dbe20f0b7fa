use thiserror::Error;

use weldq_core::Error as CoreError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable input or a table that does not fit its schema (exit 2).
    #[error("{0}")]
    Input(String),
    /// Bad flags or config file (exit 3).
    #[error("{0}")]
    Config(String),
    /// Numeric or domain failure inside an analysis (exit 4).
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Config(_) => 3,
            Self::Domain(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Schema(_) | CoreError::Csv(_) | CoreError::Io(_) => Self::Input(e.to_string()),
            CoreError::Config(_) => Self::Config(e.to_string()),
            CoreError::Domain(_) | CoreError::Convergence(_) => Self::Domain(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Input(format!("csv: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

pub fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}
