use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix entry ({0}, {1}) is not positive")]
    NotPositive(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid index subset: {0}")]
    InvalidSubset(String),

    #[error("negative value {0} where a nonnegative one is required")]
    Negative(BigRational),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("dimension {dim} exceeds the exhaustive enumeration cap of {cap}")]
    EnumerationTooLarge { dim: usize, cap: usize },

    #[error("matrix is already hyperbolic")]
    AlreadyHyperbolic,

    #[error("operator is not primitive")]
    NotPrimitive,

    #[error("matrix is nonsingular")]
    Nonsingular,

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("exact check failed: {0}")]
    CheckFailed(String),

    #[error("cannot parse {0:?} as a rational")]
    ParseRational(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
