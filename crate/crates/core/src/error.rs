use thiserror::Error;

/// Errors raised by the analytics routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative routine failed to converge.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// Input table does not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// Inconsistent or unresolvable configuration.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
