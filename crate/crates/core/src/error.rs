use thiserror::Error;

/// Errors raised by the analysis core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    InvalidOperator { deviation: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace})")]
    InvalidTrace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionError { expected: usize, found: usize },

    #[error("support condition violated; divergence is infinite")]
    InfiniteDivergence,

    #[error("alpha {0} outside the admissible range")]
    InvalidAlpha(f64),

    #[error("invalid prior: {0}")]
    InvalidPrior(&'static str),

    #[error("invalid channel: {0}")]
    InvalidChannel(&'static str),

    #[error("letter {letter} is outside an alphabet of size {alphabet_size}")]
    InvalidSequence { letter: usize, alphabet_size: usize },

    #[error("invalid type: {0}")]
    InvalidType(&'static str),

    #[error("{what} of size {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("numerical instability: {0}")]
    NumericalInstability(&'static str),

    #[error("rate {rate} is not below capacity {capacity}")]
    RateAboveCapacity { rate: f64, capacity: f64 },

    #[error("invalid rate: {0}")]
    InvalidRate(f64),

    #[error("rate grid must be positive and strictly increasing")]
    InvalidGrid,

    #[error("channel outputs do not commute")]
    NotClassical,
}

pub type Result<T> = core::result::Result<T, Error>;
