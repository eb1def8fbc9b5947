use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("harmonic {requested} requested but the series is truncated at K = {available}")]
    TruncationExceeded { requested: usize, available: usize },

    #[error("series has no certified tail bound (sampled input, tail unknown)")]
    TailUnknown,

    #[error("unknown function id `{id}`; valid ids: {valid}")]
    UnknownFunction { id: String, valid: String },

    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
