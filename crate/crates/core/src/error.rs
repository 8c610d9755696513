use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: bad indices, inconsistent sizes, invalid tree shape.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A rate matrix or stationary distribution failed validation.
    #[error("model validation failed: {0}")]
    Model(String),

    /// The operation is not defined for the given alphabet or configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A split or weight cannot be decided from the given distances.
    #[error("no decision: {0}")]
    NoDecision(String),

    /// A three-point weight was requested from non-finite distances.
    #[error("undefined weight: {0}")]
    UndefinedWeight(String),

    /// Cherry picking could not complete; `level` counts from the leaves.
    #[error("reconstruction failed at level {level}: {reason}")]
    Reconstruction { level: usize, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
