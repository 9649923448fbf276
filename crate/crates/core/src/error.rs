use alloc::string::String;
use core::fmt;

/// Library error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument was outside its documented domain.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Returns `Err(Error::InvalidArgument(..))` unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err($crate::Error::InvalidArgument(alloc::format!($($msg)+)));
        }
    };
}

pub(crate) use ensure;
