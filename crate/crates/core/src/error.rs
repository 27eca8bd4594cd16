use thiserror::Error;

/// Errors raised by the library. Each variant maps to one CLI exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied a value outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),
    /// A series or root search failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// An exhaustive computation would exceed its size guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Stub pairing never produced a simple graph within the try budget.
    #[error("rejection sampling failed after {tries} tries (simple fraction {simple_fraction})")]
    Rejection { tries: u64, simple_fraction: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
