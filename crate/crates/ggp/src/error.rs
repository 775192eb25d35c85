//! Errors of the front end and their exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed job: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid job: {0}")]
    Job(String),
    #[error(transparent)]
    Core(#[from] ggp_core::error::Error),
    #[error("cannot read job: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    InvalidInput = 1,
    Disagreement = 2,
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        ExitStatus::InvalidInput
    }
}
