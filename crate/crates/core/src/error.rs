use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("braid word is not positive")]
    NotPositive,
    #[error("invalid braid word: {0}")]
    InvalidWord(String),
    #[error("inexact division in the Laurent polynomial ring")]
    InexactDivision,
    #[error("empty input")]
    EmptyInput,
    #[error("{t} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { t: String, lo: String, hi: String },
    #[error("invalid piecewise-linear data: {0}")]
    InvalidPiecewise(String),
    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Alexander polynomial coefficients do not alternate as +1, -1, ...")]
    SignPatternBroken,
    #[error("closure is split or degenerate: det(I - Burau) vanishes")]
    ZeroDeterminantFamily,
    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),
    #[error("braid index sum {0} exceeds 6; only the lower bound is available")]
    OutOfCoveredRange(u64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("rewrite failed: {0}")]
    RewriteFailed(String),
}
