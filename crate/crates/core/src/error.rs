use thiserror::Error;

/// Errors raised by scale, set and function construction and by the deciders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. a point not in the scale).
    #[error("domain error: {0}")]
    Domain(String),
    /// A value could not be built in the supported structural class.
    #[error("construction error: {0}")]
    Construction(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("not Δ-Cauchy: {0}")]
    NotCauchy(String),
    #[error("undecided: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn construction<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Construction(msg.into()))
}
