use std::path::PathBuf;

use crate::integrate::Trajectory;
use crate::state::State3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0}")]
    WrongSystem(String),

    #[error("gauge weight t^(-D) is singular at t = {t}")]
    GaugeSingularity { t: f64 },

    #[error("non-finite state at step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },

    #[error("maximum of {max_steps} steps exhausted at t = {t_reached}")]
    MaxStepsExceeded {
        max_steps: usize,
        t_reached: f64,
        partial: Option<Box<Trajectory>>,
    },

    #[error("step size underflow (h = {h:e}) at t = {t}; problem is too stiff")]
    StepUnderflow { t: f64, h: f64 },

    #[error("singular Jacobian at {iterate:?} (residual {residual:e})")]
    SingularJacobian { iterate: State3, residual: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (last {iterate:?}, residual {residual:e})")]
    NoConvergence {
        iterate: State3,
        residual: f64,
        iterations: usize,
    },

    #[error("point {point:?} is not an equilibrium (residual {residual:e})")]
    NotAnEquilibrium { point: State3, residual: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("malformed trajectory file {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::GaugeSingularity { .. }
                | Error::NonFinite { .. }
                | Error::MaxStepsExceeded { .. }
                | Error::StepUnderflow { .. }
                | Error::SingularJacobian { .. }
                | Error::NoConvergence { .. }
                | Error::NotAnEquilibrium { .. }
        )
    }
}
