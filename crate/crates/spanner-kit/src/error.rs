use thiserror::Error;

/// Errors produced by construction, measurement and routing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpannerError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("source and destination coincide")]
    AlreadyArrived,
}

pub type Result<T> = std::result::Result<T, SpannerError>;
