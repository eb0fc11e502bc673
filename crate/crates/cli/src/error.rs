use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("input data: {0}")]
    InputData(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A computed result disagrees with a reference value it must reproduce.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Core(#[from] robustcnot_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::InputData(_) | CliError::Io { .. } => 3,
            CliError::Core(robustcnot_core::Error::Format { .. } | robustcnot_core::Error::Io { .. }) => 3,
            CliError::Consistency(_) | CliError::Core(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
