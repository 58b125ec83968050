use thiserror::Error;

/// Errors raised by the workbench.
///
/// `Internal` is reserved for outcomes that would contradict a theorem the
/// computation relies on; everything else is caused by the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("algebras do not match")]
    RingMismatch,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{0} is undefined for the zero complex")]
    ZeroComplex(&'static str),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("infeasible lift in degree {degree}: {reason}")]
    InfeasibleLift { degree: i64, reason: String },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
