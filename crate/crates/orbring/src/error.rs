use orbring_core::Error as CoreError;
use std::fmt;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppError {
    /// Malformed arguments or element specs.
    Usage(String),
    /// A configured resource bound would be exceeded.
    Bound(String),
    /// An internal consistency check failed.
    Internal(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Bound(_) => 2,
            AppError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Bound(m) => write!(f, "resource bound exceeded: {m}"),
            AppError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ResourceBound(m) => AppError::Bound(m),
            CoreError::Parse(_) | CoreError::InvalidArgument(_) | CoreError::InvalidBetti(_) => {
                AppError::Usage(e.to_string())
            }
            other => AppError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Internal(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Internal(format!("json: {e}"))
    }
}
