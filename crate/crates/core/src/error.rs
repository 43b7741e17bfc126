use thiserror::Error;

/// Errors raised by generators, solvers, urn routines and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A computation was refused because its input exceeds a configured limit.
    #[error("capacity exceeded: {what} is {value}, limit is {limit}")]
    Capacity {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    /// A parameter is outside the domain of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An instance or certificate violates its structural invariants.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Capacity {
            what,
            value: value.into(),
            limit: limit.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
