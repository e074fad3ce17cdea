//! Error type shared across the crate.

/// Errors produced by construction, validation, and numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: {lhs} vs {rhs}")]
    DimensionMismatch {
        context: &'static str,
        lhs: String,
        rhs: String,
    },

    #[error("data length {len} does not match shape {rows}x{cols}")]
    BadShape { len: usize, rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {reason} ({value:.3e})")]
    InvalidDensity { reason: &'static str, value: f64 },

    #[error("dissipation rate must be finite and nonnegative, got {rate}")]
    InvalidRate { rate: f64 },

    #[error("matrix exponential out of floating-point range (one-norm {norm:.3e})")]
    ExpmRange { norm: f64 },

    #[error("singular system in linear solve")]
    SingularSystem,

    #[error("tolerance must be finite and positive, got {value}")]
    InvalidTolerance { value: f64 },

    #[error("invalid time grid: {reason}")]
    InvalidTimeGrid { reason: String },

    #[error("invalid observable set: {reason}")]
    InvalidObservableSet { reason: String },

    #[error("measurement records do not match the frame: {reason}")]
    RecordMismatch { reason: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },
}

impl Error {
    pub(crate) fn dim_mismatch(
        context: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            context,
            lhs: format!("{}x{}", lhs.0, lhs.1),
            rhs: format!("{}x{}", rhs.0, rhs.1),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
