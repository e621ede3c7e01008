use thiserror::Error;

use crate::bipoly::BiPoly;

/// Errors raised anywhere in the pipeline.
///
/// Each variant belongs to one of three families (input, capacity,
/// consistency) which the command-line front end maps to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("capacity exceeded: {what} needs {needed} units of work, bound is {bound}")]
    Capacity {
        what: String,
        needed: u128,
        bound: u64,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible, remainder {remainder}")]
    NotDivisible { remainder: BiPoly },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model shape: {0}")]
    ModelShape(String),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),
    #[error("stratification error: {0}")]
    Stratification(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn capacity(what: impl Into<String>, needed: u128, bound: u64) -> Self {
        Error::Capacity {
            what: what.into(),
            needed,
            bound,
        }
    }

    /// Process exit status for this error: 2 input, 3 capacity, 4 consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_)
            | Error::InvalidArgument(_)
            | Error::Syntax { .. }
            | Error::ModelShape(_)
            | Error::SingularCurve(_)
            | Error::Precondition(_)
            | Error::Io { .. } => 2,
            Error::Capacity { .. } => 3,
            Error::DivisionByZero
            | Error::NotDivisible { .. }
            | Error::InconsistentCounts(_)
            | Error::Stratification(_)
            | Error::InvalidMeasure(_)
            | Error::Consistency(_) => 4,
        }
    }
}
