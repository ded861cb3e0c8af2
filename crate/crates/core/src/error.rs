use thiserror::Error;

/// Errors raised by the learning engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("state error: {0}")]
    State(String),
    #[error("unsupported lexicon version {found:?} (expected {expected:?})")]
    UnsupportedVersion { found: String, expected: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn not_found(msg: impl Into<String>) -> Self {
        Error::NotFound(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
