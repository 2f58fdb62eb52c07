use std::path::PathBuf;

use thiserror::Error;

/// Failures that end a run, grouped by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("input file {path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("numerics: {0}")]
    Numeric(#[from] twistscat_core::Error),
    #[error("output {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Input { .. } | CliError::Output { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
