use thiserror::Error;

use crate::cpn::Layer;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid decision: {0}")]
    InvalidDecision(String),

    #[error("division guard: {0}")]
    DivisionGuard(&'static str),

    #[error("unstable queue{}: utilization {rho} >= 1", layer.map(|l| format!(" at {l} layer")).unwrap_or_default())]
    UnstableQueue { layer: Option<Layer>, rho: f64 },

    #[error("reference point count {count} exceeds cap {cap}")]
    TooManyPoints { count: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate angle: vector coincides with the ideal point")]
    DegenerateAngle,

    #[error("population of size {0} is too small")]
    PopulationTooSmall(usize),

    #[error("dominance relation is not asymmetric: members {0} and {1} dominate each other")]
    AsymmetricComparator(usize, usize),

    #[error("unknown problem: {0}")]
    UnknownProblem(String),

    #[error("empty set: {0}")]
    EmptySet(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("scenario format: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
