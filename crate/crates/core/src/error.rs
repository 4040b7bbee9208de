use thiserror::Error;

pub type Result<T> = std::result::Result<T, QGlueError>;

#[derive(Debug, Error)]
pub enum QGlueError {
    /// Shapes (local dimension, party count, vector length) do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input vector is zero (or numerically indistinguishable from zero).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A matrix or basis failed a structural check (unitarity, orthonormality).
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A forced measurement outcome has (numerically) zero probability.
    #[error("outcome {outcome} on party {party} has probability {probability:e}")]
    ZeroProbabilityBranch {
        party: usize,
        outcome: usize,
        probability: f64,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl QGlueError {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        QGlueError::Dimension(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        QGlueError::InvalidArgument(msg.into())
    }
}
