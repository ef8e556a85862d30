use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Exhaustive enumeration would need more evaluations than allowed.
    #[error("enumeration budget exceeded: {required} evaluations required, cap is {cap}")]
    BudgetExceeded { required: f64, cap: f64 },

    #[error("invalid moment order {order}: {reason}")]
    InvalidOrder { order: f64, reason: String },

    #[error("threshold search failed: condition still {residual} > {q} at T = {t}")]
    BracketFailure { t: f64, residual: f64, q: f64 },

    #[error("malformed matrix document: {0}")]
    Format(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: line {line}: zero vector cannot be normalized")]
    ZeroVector { path: PathBuf, line: usize },

    #[error("identity check failed: {0}")]
    IdentityViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
