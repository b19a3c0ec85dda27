use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed potential file {path}: {source}")]
    PotentialFile { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Library(#[from] nanotube::Error),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// `2` for bad input, `3` for internal consistency failures and failed checks.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(nanotube::Error::Internal(_) | nanotube::Error::GeometryDegenerate(_)) => 3,
            CliError::CheckFailed(_) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
