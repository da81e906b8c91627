use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid tensor dimensions: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("operator is not Hermitian (deviation {deviation:e} exceeds {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid linear map: {0}")]
    InvalidMap(String),

    #[error("operation requires a bipartite space, got {0} parties")]
    NotBipartite(usize),

    #[error("vector is not normalized (norm {0})")]
    NonUnitVector(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("sample parameter {value} outside the open interval [0, {threshold})")]
    OutOfRange { value: f64, threshold: f64 },

    #[error("sampled member fails its postcondition: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
