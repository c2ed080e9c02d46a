use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("operation requires a reduced MDNF")]
    NotReduced,

    #[error("refusing to run: {what} = {value} exceeds the limit of {limit}")]
    ResourceGuard {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("non-adaptivity violation: teacher is sealed after its first batch")]
    NonAdaptive,

    #[error("perfect hash family failure: {0}")]
    PhfFailure(String),

    #[error("design failure: {0}")]
    DesignFailure(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }
}
