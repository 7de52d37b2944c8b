//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("unknown agent id `{0}`")]
    UnknownAgent(String),

    #[error("horizon mismatch: plan has {plan_steps} future steps, expected {expected_steps}")]
    HorizonMismatch {
        plan_steps: usize,
        expected_steps: usize,
    },

    #[error("trajectory infeasible at step {step}: {reason}")]
    InfeasibleTrajectory { step: usize, reason: String },

    #[error("degenerate centerline: need at least 2 points, got {0}")]
    DegenerateCenterline(usize),

    #[error("CFL violation: dt_pde {dt_pde} exceeds maximum stable step {max_stable}")]
    CflViolation { dt_pde: f64, max_stable: f64 },

    #[error("query out of bounds: dim {dim} value {value} outside [{lo}, {hi}]")]
    OutOfBounds {
        dim: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("bad file format: {0}")]
    BadFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
