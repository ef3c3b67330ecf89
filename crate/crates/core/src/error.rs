use thiserror::Error;

/// Structured failures. Every variant except `Parse` and `InvalidInput` is a
/// domain outcome rather than a bug; the CLI maps them to exit code 2.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("moduli enclosures still overlap at maximum precision: {0}")]
    InseparableAtTolerance(String),
    #[error("a rational irreducible factor has roots on both sides of the cursor: {0}")]
    MixedFactor(String),
    #[error("an eigenvalue has modulus equal to the cursor")]
    CursorOnEigenvalue,
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no position found within {0} steps")]
    PositionUnreachable(u64),
    #[error("inconclusive up to k = {0}")]
    Inconclusive(u64),
    #[error("families not in weak general position: {0}")]
    NotInPosition(String),
    #[error("no contraction: {0}")]
    NoContraction(String),
    #[error("nothing found: {0}")]
    NotFound(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
            Error::InseparableAtTolerance(_) => "InseparableAtTolerance",
            Error::MixedFactor(_) => "MixedFactor",
            Error::CursorOnEigenvalue => "CursorOnEigenvalue",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::PositionUnreachable(_) => "PositionUnreachable",
            Error::Inconclusive(_) => "Inconclusive",
            Error::NotInPosition(_) => "NotInPosition",
            Error::NoContraction(_) => "NoContraction",
            Error::NotFound(_) => "NotFound",
        }
    }

    /// Usage/parse problems as opposed to structured domain outcomes.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
