use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Evaluation outside a function's domain, or non-finite values.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A configured size or memory budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An internal consistency check failed. Indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// A mathematical hypothesis of the requested operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
