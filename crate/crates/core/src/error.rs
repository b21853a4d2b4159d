use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input; the message names the offending part.
    Input(String),
    /// A configured size limit was exceeded.
    Resource {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    /// An internal consistency check failed. Always a bug.
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, limit: usize, actual: usize) -> Result<()> {
        if actual > limit {
            Err(Error::Resource {
                what,
                limit,
                actual,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Resource {
                what,
                limit,
                actual,
            } => write!(f, "{what} limit exceeded: {actual} > {limit}"),
            Error::Internal(msg) => write!(f, "internal consistency error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
