use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while parsing inputs, building problems, or querying circuits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("variable {var} is not assigned")]
    Unassigned { var: u32 },

    #[error("variable {var} is not in the shared set")]
    NotShared { var: u32 },

    #[error("variable {var} is already assigned")]
    AlreadyAssigned { var: u32 },

    #[error("{what} has {n} variables, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("unsupported variable {var}: cardinality {card}, only binary variables are supported")]
    NonBinary { var: usize, card: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
