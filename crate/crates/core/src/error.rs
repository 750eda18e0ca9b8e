use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("DimensionMismatch: expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("NegativeScale: scale factor {0} is negative")]
    NegativeScale(f64),

    #[error("EnumerationTooLarge: {size} candidates exceed the guard limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("NotAProbability: weights sum to {0}, expected 1")]
    NotAProbability(f64),

    #[error("SpaceMismatch: operands live on probability spaces with {left} and {right} atoms")]
    SpaceMismatch { left: usize, right: usize },

    #[error("IndexOutOfRange: index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("EmptyInput: {0}")]
    EmptyInput(&'static str),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
