use thiserror::Error;

/// Failures of the word calculus and the free loop built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {0} outside 1..=127")]
    GeneratorOutOfRange(u32),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown token {found:?} at offset {offset}")]
    UnknownToken { offset: usize, found: char },
    #[error("Moufang closure exceeded cap {cap} (reached {size} members)")]
    ClosureCapExceeded { cap: usize, size: usize },
    #[error("reduction search exceeded path budget {budget}")]
    PathBudgetExceeded { budget: usize },
    #[error("reductions of {word} end in {} distinct Moufang classes: {}", classes.len(), classes.join(", "))]
    ConfluenceViolation { word: String, classes: Vec<String> },
}

impl WordError {
    /// True for refusals caused by configured resource bounds.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, WordError::ClosureCapExceeded { .. } | WordError::PathBudgetExceeded { .. })
    }
}

/// Failures of loop-algebra arithmetic and expression evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("{0} is not a prime modulus in 2..=2^31")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not of the form 1 - v: {0}")]
    NotCircleInvertible(String),
    #[error("generator x{0} has no assigned value")]
    UnassignedGenerator(u32),
    #[error("cannot invert non-monomial expression {0}")]
    NonMonomialInverse(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Failures of the truncated ideal machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("support outside universe: {}", elements.join(", "))]
    SupportOutsideUniverse { elements: Vec<String> },
    #[error("embedding check needs a non-identity element")]
    IdentityInput,
    #[error("span dimension exceeded bound {bound}")]
    DimensionOverflow { bound: usize },
    #[error("basis format version {found} is not supported (expected {expected})")]
    FormatVersion { found: u32, expected: u32 },
    #[error("malformed basis document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<WordError> for IdealError {
    fn from(e: WordError) -> Self {
        IdealError::Algebra(AlgebraError::Word(e))
    }
}

/// Failures while loading or manipulating finite loops.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteLoopError {
    #[error("row {row} is not a permutation (value {value} repeated)")]
    RowNotPermutation { row: usize, value: usize },
    #[error("column {column} is not a permutation (value {value} repeated)")]
    ColumnNotPermutation { column: usize, value: usize },
    #[error("entry at row {row}, column {column} is {value}, outside 0..{order}")]
    IndexOutOfRange { row: usize, column: usize, value: usize, order: usize },
    #[error("element {0} is not a two-sided identity")]
    MissingIdentity(usize),
    #[error("table shape does not match order {order}: {detail}")]
    Shape { order: usize, detail: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("subloop is not normal: {0}")]
    NotNormal(String),
    #[error("malformed Cayley document: {0}")]
    Malformed(String),
}
