use thiserror::Error;

/// Errors raised by the library.
///
/// `Structural` covers malformed input (shapes, missing or inadmissible entries),
/// `Validation` covers well-formed data that fails an axiom check.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("type error in `{expr}`: {message}")]
    Type { expr: String, message: String },
    #[error("braiding data required but absent")]
    MissingBraiding,
    #[error("fusion multiplicity outside supported range: {0}")]
    Multiplicity(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical procedure did not converge: {0}")]
    NonConvergence(String),
    #[error("size limit exceeded: {0}")]
    Overflow(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
