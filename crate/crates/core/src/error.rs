use thiserror::Error;

/// Errors raised by constructors, steppers and measurements.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wavenumber {tau} is not commensurate with period {length} (tau*L/2pi = {turns})")]
    Incommensurate { tau: f64, length: f64, turns: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("equation order mismatch: {0}")]
    OrderMismatch(String),

    #[error("stability bound violated: {0}")]
    Stability(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error(
        "evaluation point at distance {distance:e} is within cutoff {cutoff:e} of the filament"
    )]
    PointOnFilament { distance: f64, cutoff: f64 },

    #[error("measurement aborted: {0}")]
    Measurement(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Fails unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}
