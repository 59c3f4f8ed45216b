use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("numerical consistency error: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("common eigenspace is empty; there is no state to reproduce")]
    EmptyParadox,

    #[error("strategy space too large: {settings} settings exceed the limit of {limit}")]
    TooLarge { settings: usize, limit: usize },

    #[error("unsupported expression: {0}")]
    UnsupportedExpression(String),

    #[error("site {0} is the identity and has no two-outcome eigenbasis")]
    NoEigenbasis(usize),

    #[error("visibility is undefined for an empty counts table")]
    UndefinedVisibility,

    #[error("setting mismatch: {0}")]
    SettingMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
