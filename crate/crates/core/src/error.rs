use thiserror::Error;

/// Errors produced by the quantum-walk engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QwalkError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} is {requested}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = QwalkError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(QwalkError::InvalidArgument(msg.into()))
}
