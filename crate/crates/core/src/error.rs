use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters fall outside the regime where a bound or construction applies.
    #[error("out of regime: {condition} ({detail})")]
    OutOfRegime { condition: String, detail: String },

    /// Deviation exceeds min(p, 1-p), so only one tail is non-trivial.
    #[error("one-sided regime: eps = {eps} exceeds min(p, 1-p) = {limit}")]
    OneSidedRegime { eps: f64, limit: f64 },

    /// A planning query asked for a family that cannot be inverted.
    #[error("unsupported query: {0}")]
    Unsupported(String),

    /// A planning search found the bound not monotone where it had to be.
    #[error("bound is not monotone over the searched range: {0}")]
    NonMonotone(String),

    /// Writing a report or table failed.
    #[error("output error: {0}")]
    Output(String),

    /// Could not parse a number.
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn regime(condition: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::OutOfRegime {
        condition: condition.into(),
        detail: detail.into(),
    }
}
