use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dalembert_core::Error),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 1 for a failed internal identity, 3 for an enumeration
    /// past the feasibility guard, 2 for anything wrong with the request.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(dalembert_core::Error::TooLarge { .. }) => 3,
            CliError::Core(dalembert_core::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
