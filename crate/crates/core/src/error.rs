use thiserror::Error;

/// Errors raised by the numerical operations and file loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point budget exceeded: {required} evaluations requested, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("degenerate polytope: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{n} has prime factor {prime} outside the supported prime set")]
    UnsupportedPrime { n: u64, prime: u64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("divergent configuration: {0}")]
    Divergent(String),

    #[error("no certified transference plan: {0}")]
    NoCertificate(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

/// Default cap on the number of function evaluations a single operation may request.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

pub(crate) fn check_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}
