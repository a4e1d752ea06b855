use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Fock-space truncation discards more weight than the operation tolerates.
    #[error("truncation error: {what} (defect {defect:.3e} exceeds {limit:.3e})")]
    Truncation {
        what: String,
        defect: f64,
        limit: f64,
    },

    /// Operand shapes do not fit together.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The operator is not a valid density operator.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An iterative numerical scheme stopped before reaching its tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn truncation(what: impl Into<String>, defect: f64, limit: f64) -> Error {
    Error::Truncation {
        what: what.into(),
        defect,
        limit,
    }
}
