use alloc::string::String;
use core::fmt;

/// Errors produced by geometry, quadrature, and lattice operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the operation's domain (bad point, bad parameter).
    Domain(String),
    /// A stated precondition does not hold.
    Precondition(String),
    /// A numeric routine failed to reach its tolerance; carries the bound achieved.
    Numeric { message: String, achieved: f64 },
    /// Target not reachable on the lattice (holes disconnect it).
    Unreachable(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::Numeric { message, achieved } => {
                write!(f, "numeric failure: {message} (achieved {achieved:e})")
            }
            Error::Unreachable(m) => write!(f, "unreachable: {m}"),
        }
    }
}
