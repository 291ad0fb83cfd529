use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot normalize a zero vector (norm {0:e})")]
    ZeroVector(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid local dimensions {d_a}x{d_b}: both factors must be at least 2")]
    InvalidDims { d_a: usize, d_b: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("reference states are linearly dependent (Gram determinant {0:e})")]
    LinearlyDependent(f64),

    #[error("exhaustive grids are only available for two qubits, got {d_a}x{d_b}")]
    UnsupportedDims { d_a: usize, d_b: usize },

    #[error("expected {expected} entries, found {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("separable region exceeds the full range by {0:e}")]
    InconsistentRegions(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
