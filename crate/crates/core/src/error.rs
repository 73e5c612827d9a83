use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid size mismatch: body has m = {body}, angle belongs to m = {angle}")]
    GridMismatch { body: usize, angle: usize },

    #[error("direction is not aligned with the {m}-point angle grid")]
    NotGridAligned { m: usize },

    #[error("empty body")]
    EmptyBody,

    #[error("raster resolution {requested} exceeds the limit {limit}")]
    ResolutionTooLarge { requested: usize, limit: usize },

    #[error("support function is negative ({value}); origin lies outside the body")]
    OriginOutside { value: f64 },

    #[error("fixed direction list exhausted after {0} directions")]
    StrategyExhausted(usize),

    #[error("invariant violated in phase {phase} at step {step}: {detail}")]
    InvariantViolation { phase: String, step: usize, detail: String },

    #[error("phase {phase} used its budget of {steps} steps; best inner radius {best_rho_in}")]
    BudgetExhausted { phase: String, steps: usize, best_rho_in: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
