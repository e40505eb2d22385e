use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the calculus, the verification harness and the JSON I/O layer.
#[derive(Debug, Error)]
pub enum NctError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("theta mismatch between operands")]
    ThetaMismatch,

    #[error("invalid theta: {0}")]
    InvalidTheta(String),

    #[error("derivative order must be nonnegative, got {0:?}")]
    NegativeDerivativeOrder(Vec<i64>),

    #[error("derivative order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("divergent: {0}")]
    Divergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge (discrepancy {discrepancy:.3e})")]
    QuadratureNonconvergence { discrepancy: f64 },

    #[error("usage: {0}")]
    Usage(String),

    #[error("validation: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed JSON at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = NctError> = std::result::Result<T, E>;
