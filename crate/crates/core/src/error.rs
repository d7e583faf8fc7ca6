use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {node} out of range for a {n}-node graph")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("node {node} is missing its self-loop")]
    MissingSelfLoop { node: usize },

    #[error("diameter is undefined: graph is not strongly connected")]
    NotStronglyConnected,

    #[error("instant {k} is beyond the schedule horizon {horizon}")]
    HorizonExceeded { k: usize, horizon: usize },

    #[error("no time-path from {from} to {to} starting at {start} within {searched} steps")]
    NoTimePath {
        from: usize,
        to: usize,
        start: usize,
        searched: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("protocol invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
