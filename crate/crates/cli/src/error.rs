//! Process-level error handling and exit codes.
//!
//! Exit code 0 means every requested computation and certificate succeeded,
//! 1 means a mathematical verification failed, and 2 means the invocation or
//! its input could not be parsed.

use serde_json::Value;

/// An error that terminates the process with a specific exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, or malformed input documents.
    Usage(String),
    /// A certificate or construction failed mathematically. The optional
    /// detail is a machine-readable JSON object describing the failure.
    Verification {
        message: String,
        detail: Option<Value>,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError::Verification {
            message: message.into(),
            detail: None,
        }
    }

    pub fn verification_with(message: impl Into<String>, detail: Value) -> Self {
        CliError::Verification {
            message: message.into(),
            detail: Some(detail),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification { .. } => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) => m,
            CliError::Verification { message, .. } => message,
        }
    }

    pub fn detail(&self) -> Option<&Value> {
        match self {
            CliError::Usage(_) => None,
            CliError::Verification { detail, .. } => detail.as_ref(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
