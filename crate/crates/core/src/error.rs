use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("columns are not orthonormal (max deviation {deviation})")]
    NotOrthonormal { deviation: f64 },
    #[error("eigenvalue {value} at round {round}, index {index} lies outside [-1, 1]")]
    EigenvalueOutOfRange {
        round: usize,
        index: usize,
        value: f64,
    },
    #[error("matrix at position {index} has spectral norm {norm} > 1")]
    NormTooLarge { index: usize, norm: f64 },
    #[error("dimension {n} exceeds the dense eigensolver cap of {cap}; use power_method_baseline")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("vector is not an eigenvector of the matrix at round {round} (residual {residual})")]
    NotEigenvector { round: usize, residual: f64 },
    #[error("declared G too small: combined matrix at round {round} has spectral norm {norm}")]
    LipschitzMisdeclared { round: usize, norm: f64 },
    #[error("oracle error: {0}")]
    Oracle(String),
    #[error("horizon too small: step size {mu} exceeds 1/2; need at least {min_horizon} rounds")]
    HorizonTooSmall { mu: f64, min_horizon: usize },
    #[error("unsupported instance: {0}")]
    Unsupported(&'static str),
    #[error("malformed instance: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
