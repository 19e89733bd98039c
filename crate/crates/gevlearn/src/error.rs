use thiserror::Error;

use crate::gev::GevVariant;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A model description violates a structural invariant.
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),

    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation has no closed form (or no meaning) for this variant.
    #[error("operation `{operation}` does not support the {variant:?} variant")]
    UnsupportedVariant {
        operation: &'static str,
        variant: GevVariant,
    },

    /// A payoff vector exceeded the configured sup-norm bound.
    #[error("payoff sup-norm {norm} exceeds the configured bound {bound}")]
    PayoffOutOfBounds { norm: f64, bound: f64 },

    /// Iterative solver hit its iteration cap; carries the best iterate seen.
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    /// The model admits no meaningful tuning (e.g. a single alternative).
    #[error("degenerate model: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A brute-force enumeration would exceed the desk-scale cap.
    #[error("game has {profiles} pure profiles, above the enumeration cap {cap}")]
    GameTooLarge { profiles: u128, cap: u128 },

    /// A numeric audit found a violated property; names it and the witness.
    #[error("audit failure: property `{property}` violated at {witness:?} ({detail})")]
    AuditFailure {
        property: String,
        witness: Vec<f64>,
        detail: String,
    },

    /// Claimed smoothness parameters fail at some pure profile.
    #[error("smoothness check failed at profile {profile:?}: {detail}")]
    SmoothnessViolated { profile: Vec<usize>, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
