use std::path::PathBuf;

use thiserror::Error;

use rqc_core::ErrorKind;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rqc_core::Error),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path} is not a valid request: {source}")]
    Request { path: PathBuf, source: serde_json::Error },

    #[error("{0}")]
    Usage(String),

    #[error("server failed: {0}")]
    Serve(std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation | ErrorKind::Infeasible => EXIT_VALIDATION,
                ErrorKind::Resource => EXIT_RESOURCE,
            },
            CliError::Read { .. } | CliError::Request { .. } | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Write { .. } | CliError::Serve(_) | CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
