use std::fmt::Display;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or malformed input. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// The numerics refused a valid-looking input. Exit code 3.
    #[error("{0}")]
    Anomaly(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Anomaly(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(path: &Path, err: impl Display) -> Self {
        CliError::Config(format!("{}: {err}", path.display()))
    }

    pub fn io(path: &Path, err: impl Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
