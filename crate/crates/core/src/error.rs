use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a sub-multiset: {subtrahend} is not contained in {minuend}")]
    NotSubMultiset { minuend: String, subtrahend: String },

    #[error("token count overflow")]
    Overflow,

    #[error("step {step} is not enabled at {marking}")]
    NotEnabled { step: String, marking: String },

    #[error("unknown binding {0}")]
    UnknownBinding(String),

    #[error("ill-formed step sequence: {0}")]
    IllFormedSequence(String),

    #[error("sequences are not composable: first ends at {end}, second starts at {start}")]
    NotComposable { end: String, start: String },

    #[error("not function-like: {0}")]
    NotFunctionLike(String),

    #[error("resource limit: node budget of {0} exhausted")]
    ResourceLimit(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("validation failed:\n{0}")]
    ValidationFailed(Report),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("identifier `{0}` contains the reserved separator `⊙`")]
    ReservedSeparator(String),
}
