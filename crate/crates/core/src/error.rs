use thiserror::Error;

/// Errors raised by constructors and evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DmnError {
    #[error("dimension mismatch: expected {expected} categories, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("total count {total} exceeds the supported maximum of {max}")]
    ResourceLimit { total: u64, max: u64 },
}

pub type Result<T> = std::result::Result<T, DmnError>;
