use std::path::PathBuf;

use crate::solver::SolverState;
use crate::toy_ode::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("strain field violates the compatibility constraint (residual {residual:.3e} > {limit:.1e})")]
    ConstraintViolation { residual: f64, limit: f64 },

    #[error("invalid exponent q = {0}")]
    InvalidExponent(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("records are not uniformly spaced in time")]
    NonUniformSpacing,

    /// The solver produced a non-finite value; `last_state` is the last finite state.
    #[error("non-finite solution after t = {last_time}")]
    Instability {
        last_time: f64,
        last_state: Box<SolverState>,
    },

    /// Adaptive step size collapsed before the blow-up threshold was reached.
    #[error("step size underflow at t = {time}")]
    StepUnderflow {
        time: f64,
        trajectory: Box<Trajectory>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("malformed snapshot {path:?}: {reason}")]
    Snapshot { path: Option<PathBuf>, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
