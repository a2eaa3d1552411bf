use thiserror::Error;

/// Errors raised by the walk, special-function, moment and harness layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ErwError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid walk state: {0}")]
    InvalidState(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, ErwError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(ErwError::Domain(msg.into()))
}
