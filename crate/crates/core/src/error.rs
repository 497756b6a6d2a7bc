use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("curve must have at least one vertex")]
    EmptyCurve,
    #[error("dimension {0} outside supported range 1..={max}", max = crate::geometry::MAX_DIM)]
    UnsupportedDimension(usize),
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a backbone curve: {0}")]
    NotBackbone(String),
    /// An internal consistency check failed, or a caller-supplied decider
    /// broke its fuzzy contract.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
