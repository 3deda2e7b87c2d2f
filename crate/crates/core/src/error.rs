use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial division is not exact: {0}")]
    NotDivisible(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("splitting count is negative or non-integral: {0}")]
    NonIntegralSplitting(String),
    #[error("logic error: {0}")]
    Logic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by bad input or exhausted caps rather than by a failed identity.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Resource(_) | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
