use thiserror::Error;

/// Errors raised by the optimizers, the function registry and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("search region is empty")]
    EmptyRegion,

    #[error("unknown algorithm `{0}` (expected one of es, fa, pso, nm)")]
    UnknownAlgorithm(String),

    #[error("unknown problem `{name}`{}", suggestion.as_ref().map(|s| format!(", did you mean `{s}`?")).unwrap_or_default())]
    UnknownProblem {
        name: String,
        suggestion: Option<String>,
    },

    #[error("unknown output format `{0}` (expected json, csv or table)")]
    UnknownFormat(String),

    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
