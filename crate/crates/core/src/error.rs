use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration field violates its invariant. `key` is the dotted
    /// configuration path of the offending field.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
