use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied inputs that violate an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("exponent overflow (limit {limit})")]
    ExponentOverflow { limit: u32 },

    #[error("resource budget exceeded after {elapsed_ms} ms")]
    Timeout { elapsed_ms: u64 },

    /// A rational coefficient has a denominator divisible by the working prime.
    #[error("prime {0} divides a coefficient denominator")]
    BadPrime(u32),

    #[error("instance too large for oracle: {0}")]
    TooLarge(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
