use thiserror::Error;

/// Raised by domain mutations and propagators when the current search node
/// has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
#[error("contradiction")]
pub struct Contradiction;

pub type PropResult = Result<(), Contradiction>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("instance too large for the exact oracle: n = {n} (limit {limit})")]
    SizeLimit { n: usize, limit: usize },
    #[error("no decision available")]
    NoDecision,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
