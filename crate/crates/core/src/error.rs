use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three groups the CLI maps onto exit codes: malformed
/// input, refusals (budget or precondition), and internal invariant failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational `{0}`")]
    BadRational(String),
    #[error("negative weight `{0}` (weights must be non-negative)")]
    NegativeWeight(String),
    #[error("table has {actual} entries, expected {expected} (= q^k)")]
    TableLength { expected: usize, actual: usize },
    #[error("tuple of length {actual} passed to function of arity {expected}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("value {value} outside domain [0, {q})")]
    DomainValue { value: usize, q: usize },
    #[error("domain size must be at least 2, got {0}")]
    DomainSize(usize),
    #[error("constraint {index}: {message}")]
    Constraint { index: usize, message: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("instance JSON: {0}")]
    Json(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("graph: {0}")]
    Graph(String),
    #[error("matrix: {0}")]
    Matrix(String),
    #[error("conflicting pins on variable {0}")]
    ConflictingPins(usize),
    #[error("enumeration of {states} states exceeds budget of {budget}")]
    BudgetExceeded { states: String, budget: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that reject the request rather than the input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::Unsupported(_) | Error::Precondition(_)
        )
    }

    /// True for internal invariant failures.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
