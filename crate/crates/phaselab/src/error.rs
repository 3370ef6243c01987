use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unsupported window shape: above-tolerance entries do not form a circular interval")]
    NonIntervalSupport,

    #[error("support exceeds L/2 requirement (support length {support}, L = {l})")]
    SupportTooLong { support: usize, l: usize },

    #[error("degenerate window endpoints: |phi(n0) * phi(n0 + l_phi)| = 0")]
    DegenerateWindowEndpoints,

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("components overlap at index {0}")]
    OverlappingComponents(usize),

    #[error("inconsistent signal profile: {0}")]
    InconsistentProfile(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
