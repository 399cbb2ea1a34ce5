use thiserror::Error;

/// Errors raised across the crate.
///
/// `Input` covers violated preconditions (bad arities, malformed values),
/// `Domain` covers mathematically undefined requests (valuation of zero,
/// comparison map without a constant), `Undecided` marks bounded searches
/// that ran out of budget without reaching a verdict, and `Parse` carries
/// source positions for the presentation grammar.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("undecided at bound: {0}")]
    Undecided(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Error {
        Error::Domain(msg.into())
    }

    pub fn undecided(msg: impl Into<String>) -> Error {
        Error::Undecided(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Error {
        Error::Internal(msg.into())
    }
}
