use thiserror::Error;

/// Errors raised by the structured linear algebra and the estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {index} = {value:e})")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error(
        "autoregressive model is unstable: reflection coefficient {index} has modulus {modulus}"
    )]
    Unstable { index: usize, modulus: f64 },

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} exceeds the limit {limit} of {what}; use the Frobenius or box constrained variants instead")]
    DimensionGuard {
        what: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid box function family: {0}")]
    InvalidFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
