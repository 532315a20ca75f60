//! Error type shared across the workspace.

/// Errors surfaced by parsers, validators, and gated computations.
///
/// `Gate` is kept distinct from `Invalid` because callers (notably the CLI)
/// map exceeded computation gates to a dedicated exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("computation gate exceeded: {0}")]
    Gate(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn gate(msg: impl Into<String>) -> Self {
        Error::Gate(msg.into())
    }
}
