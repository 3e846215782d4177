use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {requested} exceeds the cap of {cap} points")]
    DegreeOverflow { requested: u128, cap: usize },
    #[error("letter index {index} has no assigned element ({available} assigned)")]
    LetterOutOfRange { index: usize, available: usize },
    #[error("elements do not share one carrier: {0}")]
    MixedCarriers(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("matrix is singular or nearly so (smallest singular value <= {0:e})")]
    Singular(f64),
    #[error("polar iteration did not converge after {iterations} steps (last step {step:e}, unitarity residual {residual:e})")]
    NoConvergence { iterations: usize, step: f64, residual: f64 },
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` is bound twice")]
    DuplicateBinder(String),
    #[error("missing assignment for `{0}`")]
    MissingAssignment(String),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    EnumerationCap { order: u128, cap: u128 },
    #[error("estimated work {work} exceeds the work cap {cap}")]
    WorkCap { work: u128, cap: u128 },
    #[error("empty domain")]
    EmptyDomain,
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("section is inconsistent with the quotient map: {0}")]
    SectionInconsistent(String),
    #[error("inner morphism does not cover element {0}")]
    DomainNotCovered(String),
    #[error("morphism is not nice: {0}")]
    NotNice(String),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("group algebra elements do not match: {0}")]
    MismatchedAlgebra(String),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("state space of {states} exceeds the memo cap {cap}")]
    MemoCap { states: usize, cap: usize },
    #[error("subshift is not proper on the window: {0}")]
    NotProper(String),
    #[error("length function violates {0}")]
    LengthAxiom(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}
