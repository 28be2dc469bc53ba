use thiserror::Error;

/// Errors raised by the library.
///
/// `Hypothesis` and `Infeasible` are expected outcomes that callers (the CLI
/// in particular) report to the user; `Audit` means two independent
/// computations disagreed and always indicates a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field mismatch: operands belong to F_{left} and F_{right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("hypotheses not met: {0}")]
    Hypothesis(String),

    #[error("refused: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Audit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
