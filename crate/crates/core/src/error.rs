use thiserror::Error;

/// Errors raised by code construction, the test oracle and the search strategies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("contract violated: {0}")]
    Contract(String),
    /// Test outcomes that no defect set of the admissible size could produce.
    #[error("inconsistent outcomes: {0}")]
    Inconsistent(String),
    #[error("enumeration refused: {0}")]
    EnumerationGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
