use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quandle axiom {axiom} violated: {witness}")]
    AxiomViolation { axiom: u8, witness: String },

    #[error("invalid coset data for fiber {index}: {reason}")]
    InvalidCosetData { index: usize, reason: String },

    #[error("group is not abelian")]
    NonAbelian,

    #[error("search budget exceeded after {explored} nodes ({found} automorphisms found so far)")]
    BudgetExceeded { explored: u64, found: usize },

    #[error("quandle of size {size} exceeds exhaustive bound {bound}")]
    TooLarge { size: usize, bound: usize },

    #[error("element is not a unit")]
    NotAUnit,

    #[error("valuation {valuation} outside the convergence domain (need > {needed})")]
    OutOfDomain { valuation: i64, needed: String },

    #[error("precision exhausted: {0}")]
    Inconclusive(String),

    #[error("incompatible local fields")]
    FieldMismatch,

    #[error("unsupported local field: {0}")]
    UnsupportedField(String),

    #[error("field Q({0}) is not real quadratic")]
    NotRealQuadratic(i64),

    #[error("invalid field parameter: {0}")]
    InvalidField(String),

    #[error("{0} is not a prime")]
    NotPrime(i64),

    #[error("discriminant {disc} exceeds bound {bound}")]
    DiscriminantTooLarge { disc: i64, bound: i64 },

    #[error("group order {order} exceeds ceiling {ceiling}")]
    GroupTooLarge { order: u64, ceiling: u64 },

    #[error("ramified prime in M: {0}")]
    RamifiedPrime(String),

    #[error("invalid conjugacy class label: {0}")]
    InvalidClass(String),

    #[error("levels are incompatible: {0}")]
    LevelMismatch(String),

    #[error("no growth detected: G appears finite")]
    FiniteGroup,

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("case mismatch: {0}")]
    CaseMismatch(String),

    #[error("unmatched fiber: {0}")]
    UnmatchedFiber(String),

    #[error("malformed exchange data: {0}")]
    Format(String),

    #[error("invalid config: {field}: {message}")]
    Config { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
