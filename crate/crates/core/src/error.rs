use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input with the wrong shape (array lengths, missing fields).
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A capacity failed normalization or monotonicity.
    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),
    /// Argument outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unbounded: {0}")]
    Unbounded(String),
    /// Iteration or size caps exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Two routes that must agree did not.
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
