use alloc::boxed::Box;
use alloc::string::String;

use crate::series::SumResult;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller asked for something the API does not support.
    #[error("usage error: {0}")]
    Usage(String),
    /// Inputs are not accurate enough for the requested result.
    #[error("precision error: {0}")]
    Precision(String),
    /// The chosen summation strategy does not apply to this series.
    #[error("strategy error: {0}")]
    Strategy(String),
    /// The series did not reach the requested accuracy within the term budget.
    #[error("convergence error: {message}")]
    Convergence {
        message: String,
        best: Option<Box<SumResult>>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
