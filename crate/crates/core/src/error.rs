use thiserror::Error;

/// Errors raised by the tomoinfo library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported matrix dimension {0}")]
    UnsupportedDimension(usize),

    #[error("matrix has {got} entries, expected {expected}")]
    EntryCount { expected: usize, got: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("subsystem index must be 1 or 2, got {0}")]
    BadSubsystem(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("Werner parameter p = {0} outside [-1/3, 1]")]
    ParameterOutOfRange(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("tomogram has a zero entry (x = {0}); the logarithmic gradient is undefined there")]
    BoundaryOfSupport(f64),

    #[error("grid resolution must be at least {min}, got {got}")]
    InvalidResolution { min: usize, got: usize },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
