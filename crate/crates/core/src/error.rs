use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("Milnor number of {0} is not an integer")]
    NonIntegral(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("chart hyperplane passes through the singular point {0}")]
    ChartHitsSingularity(String),

    #[error("duplicate jet target at point {0}")]
    DuplicatePoint(String),

    #[error("profile carries no coordinates for the points required by the oracle")]
    MissingCoordinates,

    #[error("Euler bookkeeping does not produce a polynomial: {0}")]
    NonPolynomial(String),

    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error("soundness violation: {0}")]
    SoundnessViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for failures of the analysis itself, as opposed to bad input.
    pub fn is_analysis_failure(&self) -> bool {
        matches!(
            self,
            Error::Unresolved(_)
                | Error::MissingCoordinates
                | Error::SoundnessViolation(_)
                | Error::NonPolynomial(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
