use thiserror::Error;

/// Crate-wide error type.
///
/// Every variant maps to one stable machine-readable code (see [`Error::code`]);
/// the CLI prints that code so scripts can dispatch on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),

    #[error("division by zero in the field")]
    DivisionByZero,

    #[error("degenerate class: {0}")]
    DegenerateClass(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// There is no legal ending of length `b`; distinct from a genuine zero count.
    #[error("no terminal arcs of block length {b}")]
    NoTerminal { b: usize },

    #[error("refusing double-precision evaluation: {0}")]
    PrecisionRefused(String),

    #[error("growth constant K = {k} does not give B > 1")]
    NotGrowing { k: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("budget exceeded: {needed} states needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("subset at position {0} is empty")]
    EmptySubset(usize),
}

impl Error {
    /// Stable machine-readable code for CLI consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::Shape(_) => "ShapeError",
            Error::Range(_) => "RangeError",
            Error::NotPrime(_) => "NotPrime",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::DivisionByZero => "DivisionByZero",
            Error::DegenerateClass(_) => "DegenerateClass",
            Error::Parse(_) => "ParseError",
            Error::InvalidDigraph(_) => "InvalidDigraph",
            Error::Unsupported(_) => "Unsupported",
            Error::NoTerminal { .. } => "NoTerminal",
            Error::PrecisionRefused(_) => "PrecisionRefused",
            Error::NotGrowing { .. } => "NotGrowing",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::EmptySubset(_) => "EmptySubset",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
