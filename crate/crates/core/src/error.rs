use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Mathematically invalid input (bad base, zero denominator, exponent out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation exists but not for these parameters (e.g. Haar coefficients for b != 2).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A digit or schedule budget was exhausted.
    #[error("resource limit: {what} (reached level {level})")]
    Resource { what: String, level: usize },

    /// Two forced template positions collided. Should be unreachable for valid schedules.
    #[error("internal error: {0}")]
    Internal(String),

    /// Malformed external input (JSON, hex prefixes, y-spec strings).
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
