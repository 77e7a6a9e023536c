use thiserror::Error;

#[derive(Debug, Error)]
pub enum SqssError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SqssError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(SqssError::InvalidArgument(msg.into()))
}
