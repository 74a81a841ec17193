use thiserror::Error;

/// Errors produced by the model, the numerical oracles and the sweep front-end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A covariance matrix or density matrix that violates physicality.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Input outside the domain of a closed-form expression.
    #[error("outside domain: {0}")]
    Domain(String),

    #[error("grid half-extent {have:.4e} m does not cover the state; need at least {required:.4e} m")]
    GridTooSmall { have: f64, required: f64 },

    #[error("oscillatory kernel undersampled: {have} quadrature points, need at least {required}")]
    Undersampled { have: usize, required: usize },

    #[error("grid aliasing at step {step}: edge fraction {fraction:.3e} exceeds {limit:.1e}")]
    Aliasing {
        step: usize,
        fraction: f64,
        limit: f64,
    },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    /// A computed row or oracle report failed re-validation.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
