use thiserror::Error;

/// Errors produced by gatedist operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("outside operator domain: {0}")]
    Domain(String),

    #[error("dimension {dim} exceeds size cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("gates are indistinguishable (distance {0:e})")]
    IdenticalGates(f64),

    #[error("numerical method did not converge: {0}")]
    Convergence(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by a numerical routine failing to converge,
    /// as opposed to bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
