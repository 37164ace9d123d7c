use alloc::string::String;

/// Errors raised when inputs violate an operation's preconditions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid arc: start {start}, width {width}")]
    InvalidArc { start: f64, width: f64 },
    #[error("pieces do not partition the circle: {0}")]
    InvalidPartition(String),
    #[error("invalid data measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid sign pattern: {0}")]
    InvalidSigns(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid closure element: {0}")]
    InvalidClosure(String),
    #[error("not enough alternating node pairs: need {needed}, have {available}")]
    InsufficientPairs { needed: usize, available: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
