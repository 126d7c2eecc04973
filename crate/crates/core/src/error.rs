use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps `Invalid*`/`NotRepresentable`/`Degenerate` to exit code 2 and
/// `BudgetExceeded`/`NotConverged` to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a sum of two squares")]
    NotRepresentable(u64),

    #[error("search budget exceeded: estimated {estimated} candidate tuples, budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("coefficients not normalized: sum |a|^2 = {0}")]
    NotNormalized(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
