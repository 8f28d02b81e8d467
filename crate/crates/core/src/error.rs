use thiserror::Error;

/// Errors raised by the workbench.
///
/// The variants line up with the CLI exit codes: `Budget` means a
/// configured search cap was hit, `Verification` means a result failed its
/// independent re-check, and everything else is a usage or input error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn budget(msg: impl Into<String>) -> Error {
    Error::Budget(msg.into())
}
