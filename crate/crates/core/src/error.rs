use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {rows:?}: {reason}")]
    InvalidPartition { rows: Vec<usize>, reason: String },

    #[error("partitions of different sizes: {0}")]
    MismatchedSize(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("{what} of dimension {dim} exceeds the configured cap {cap}")]
    ResourceLimit { what: &'static str, dim: usize, cap: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("subsystem index {index} out of range for {count} factors")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
