use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value at node {node} (t = {t}): {detail}")]
    NonFinite { node: usize, t: f64, detail: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("thermal scenario: {0}")]
    Scenario(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit status used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::Config { .. }
            | Error::Io { .. }
            | Error::Scenario(_)
            | Error::GridMismatch(_) => 2,
            Error::NonFinite { .. } | Error::Numerical(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
