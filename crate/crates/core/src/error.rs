use thiserror::Error;

use crate::robustfamily::FamilyCurve;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("derivative has no two distinct real roots (discriminant {discriminant:e})")]
    DegenerateCritical { discriminant: f64 },

    #[error("critical point {root} lies outside the open unit interval")]
    OutOfRange { root: f64 },

    #[error("Schwarzian undefined at x = {x}: |f'(x)| = {derivative:e} is below tolerance")]
    NearCriticalPoint { x: f64, derivative: f64 },

    #[error("orbit left [0, 1] at step {step} (value {value})")]
    EscapedDomain { step: usize, value: f64 },

    #[error("the identity map has a continuum of fixed points")]
    DegenerateIdentity,

    #[error("no admissible seed found in the search box")]
    NoSeedFound,

    #[error("invalid continuation step {0}")]
    InvalidStep(f64),

    #[error("corrector diverged after {} accepted samples", .partial.len())]
    CorrectorDiverged { partial: Box<FamilyCurve> },

    #[error("grid must have at least 2 points, got {0}")]
    InvalidGrid(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("delta {delta} does not exceed grid spacing {spacing}")]
    DeltaTooSmall { delta: f64, spacing: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
