use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A structurally malformed or invariant-violating value.
    #[error("invalid: {0}")]
    Invalid(String),

    /// A precondition of the operation does not hold.
    #[error("{0}")]
    Domain(String),

    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),

    /// The comparison of two elements exceeded the unfolding cap.
    #[error("undecided after {events} events (unfolding cap reached)")]
    Undecided { events: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
