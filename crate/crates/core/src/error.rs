use thiserror::Error;

/// Errors raised by the exact algebra, quadrature and uncertainty layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("invalid root: {0}")]
    InvalidRoot(String),

    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),

    #[error("reflection group exceeds the size cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("polynomial is not divisible by the linear form {0}")]
    NotDivisible(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("exact integration unsupported: {0}; use the Monte Carlo oracle")]
    UnsupportedTier(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("angular operator needs distinct axes, got i = j = {0}")]
    EqualAxes(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("function is not admissible: {0}")]
    NotAdmissible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-finite Monte Carlo sample")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
