use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("writing metadata: {0}")]
    Json(#[from] serde_json::Error),
    #[error("computation failed: {0}")]
    Compute(#[from] ttc_core::Error),
    #[error("check failed: {0}")]
    Contract(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 ok, 1 I/O, 2 usage, 3 contract violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Json(_) => 1,
            CliError::Compute(_) | CliError::Contract(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
