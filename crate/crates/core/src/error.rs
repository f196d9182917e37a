use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: estimated {estimated} work items, budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("not found below cap {cap}")]
    NotFound { cap: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
