use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: gdrst_core::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("algorithms disagree: {0}")]
    Mismatch(String),
}

impl WorkbenchError {
    pub fn data(context: impl Into<String>, source: gdrst_core::Error) -> Self {
        Self::Data { context: context.into(), source }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Usage(_) => 1,
            WorkbenchError::Io { .. } | WorkbenchError::Data { .. } | WorkbenchError::Csv(_) => 2,
            WorkbenchError::Mismatch(_) => 3,
        }
    }
}

pub type WorkbenchResult<T> = Result<T, WorkbenchError>;
