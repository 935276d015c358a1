use thiserror::Error;

/// Errors raised by the workbench.
///
/// The variants line up with the CLI exit codes: `Input` is a malformed
/// request, `Cap` a configured resource ceiling, `Verification` a failed
/// re-check of stored data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::Cap(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
