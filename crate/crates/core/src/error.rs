use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the search engine, the problem registries and the harness.
#[derive(Debug, Error)]
pub enum BasError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },

    #[error("point {point:?} lies outside the search space")]
    OutOfBounds { point: Vec<f64> },

    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("success rate of an empty outcome list is undefined")]
    EmptyOutcomes,

    #[error("uniform initialization needs a fully bounded search space")]
    UnboundedSpace,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = BasError> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(BasError::DimensionMismatch { expected, found })
    }
}
