use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A value lies outside the domain it is used with (unknown neuron,
    /// empty string where a nonempty one is required, zero argument...).
    #[error("input domain error: {0}")]
    InputDomain(String),

    /// A structural invariant does not hold.
    #[error("validation error: {0}")]
    Validation(String),

    /// A construction precondition failed (for example the language of an
    /// output is not converging).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A size or enumeration budget would be exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable process exit code for this class of error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InputDomain(_) => 1,
            Error::Validation(_) => 2,
            Error::Precondition(_) => 3,
            Error::Budget(_) => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
