use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no forms of discriminant {0}: discriminant must be 0 or 1 mod 4")]
    EmptyDiscriminant(i64),
    #[error("square discriminant {0} is not supported (infinite geodesic)")]
    SquareDiscriminant(i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("form {0:?} must have a > 0; negate it (the cycle integral only changes sign)")]
    NegativeLeading([i64; 3]),
    #[error("insufficient precision or series order: {0}")]
    InsufficientPrecision(String),
    #[error("point lies on a pole of the meromorphic form (CM point of {0:?})")]
    Pole([i64; 3]),
    #[error("pole on the cycle at parameter {0}; enable principal-value mode")]
    PoleOnCycle(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("mock solver failed: {0}")]
    SolverFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatched discriminant groups: {0}")]
    GroupMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
