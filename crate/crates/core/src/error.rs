use thiserror::Error;

/// Errors raised by the decision procedures, oracles and writers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("p = {0} is negative; apply normalize_sign first")]
    Unnormalized(i64),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("invalid interval: lower end {lo} exceeds upper end {hi}")]
    InvalidInterval { lo: String, hi: String },
    #[error("cannot parse {field}: {reason}")]
    Parse { field: String, reason: String },
    #[error("no chain witness: {0}")]
    NoChain(String),
    #[error("not a candidate tile digit set: m*n = {mn} but |p*q| = {pq}")]
    NotTileCandidate { mn: u64, pq: u64 },
    #[error("arithmetic range exceeded: {0}")]
    Overflow(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
