//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by construction, composition, and criterion checks.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share a shape do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A claimed conjugation is not one (unitarity or involutivity violated).
    #[error("not a conjugation: {reason} (residual {residual:.3e})")]
    NotConjugation { reason: &'static str, residual: f64 },

    /// A Laurent coefficient sits outside the band |n| <= N-1.
    #[error("coefficient index {index} outside band |n| <= {max} for model degree {model_degree}")]
    BandLimit {
        index: i64,
        max: i64,
        model_degree: usize,
    },

    /// An operation required an analytic input (coefficients at n >= 0 only).
    #[error("input is not analytic: coefficient present at n = {index}")]
    NotAnalytic { index: i64 },

    /// The canonical conjugation is only defined on z*K_{Theta_1}.
    #[error("vector has a nonzero constant block (norm {norm:.3e}); not in z*K_Theta1")]
    OutsideShiftedModelSpace { norm: f64 },

    /// A hypothesis of a criterion check failed.
    #[error("hypothesis violation: {name}")]
    HypothesisViolation { name: &'static str },

    /// Symbol extraction was asked for on a non-Toeplitz operator.
    #[error("operator is not block Toeplitz (residual {residual:.3e} > tol {tol:.3e})")]
    NotToeplitz { residual: f64, tol: f64 },

    /// Bad runtime configuration (suite parameters, benchmark sizes).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
