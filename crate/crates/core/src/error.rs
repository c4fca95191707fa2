//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its allowed domain.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// What went wrong.
        message: String,
    },

    /// A function argument (grid, range, tolerance, ...) is malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The characteristic denominator vanished; the requested point sits on
    /// an undamped pole. Stable operating points never trigger this.
    #[error("characteristic denominator singular: |d| = {magnitude:e} below guard {guard:e}")]
    Singularity {
        /// Magnitude of the denominator at the offending point.
        magnitude: f64,
        /// Guard threshold that was crossed.
        guard: f64,
    },

    /// An iterative numerical method failed to reach its target.
    #[error("numerical failure: {message}")]
    NumericalFailure {
        /// Description of the failed computation.
        message: String,
        /// Residuals or the convergence sequence at the point of failure.
        residuals: Vec<f64>,
    },

    /// A bracketing interval does not straddle the sought feature.
    #[error("bracketing error: {0}")]
    Bracket(String),

    /// Photon correlations are undefined because the output flux vanishes
    /// (zero coupling or zero pump power).
    #[error("correlation undefined: output photon flux is zero (chi = 0 or pump power = 0)")]
    CorrelationUndefined,

    /// I/O failure while writing datasets.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
