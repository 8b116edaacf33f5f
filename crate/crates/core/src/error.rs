use thiserror::Error;

use crate::physics::AccelerationStrategy;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("action period must be non-negative, got {0} s")]
    NegativePeriod(f64),

    #[error("velocity {velocity} m/s is unattainable; it must lie in (0, {asymptote}) m/s")]
    UnattainableVelocity { velocity: f64, asymptote: f64 },

    #[error("sensing range is zero, no roofline exists")]
    DegenerateRange,

    #[error("distance travelled in one action period ({travel} m) reaches the sensing range ({range} m)")]
    ImpossibleCalibration { travel: f64, range: f64 },

    #[error("cannot climb: thrust-to-weight ratio {thrust_to_weight:.4} leaves no headroom ({strategy})")]
    CannotClimb {
        thrust_to_weight: f64,
        strategy: AccelerationStrategy,
    },

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("{path}: unknown {kind} preset \"{name}\"")]
    UnknownPreset {
        path: String,
        kind: &'static str,
        name: String,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by the document or input values rather than by physics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput { .. } | Error::Config { .. } | Error::UnknownPreset { .. }
        )
    }

    /// Field path for validation errors, when one is known.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::Config { path, .. } | Error::UnknownPreset { path, .. } => Some(path),
            Error::InvalidInput { field, .. } => Some(field),
            _ => None,
        }
    }
}
