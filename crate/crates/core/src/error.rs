use thiserror::Error;

/// Errors raised by the geometry engine.
///
/// The three kinds map onto the CLI exit codes: `Domain` and `Resource`
/// are well-formed requests that cannot be answered, `Input` is malformed
/// data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
