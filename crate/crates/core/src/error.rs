use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different algebras")]
    MismatchedAlgebra,

    #[error("product structure unavailable: {0}")]
    ProductStructureUnavailable(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid fiber #{index} ({a},{b}): {reason}")]
    InvalidFiber {
        index: usize,
        a: i64,
        b: i64,
        reason: String,
    },

    #[error("{0} is not a supported prime")]
    InvalidPrime(u32),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("excess {excess} is smaller than the source degree {degree}; the weight-2 certificate does not apply")]
    ExcessTooSmall { excess: u32, degree: u32 },

    #[error("tensor power needs {needed} basis tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("tensor powers are only implemented in characteristic 2 (got p = {0})")]
    OddCharacteristicUnsupported(u32),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("operation is only defined on degree {expected}, element has degree support {found:?}")]
    DegreeOutOfDomain { expected: u32, found: Vec<u32> },

    #[error("zero class rejected: {0}")]
    ZeroClass(String),

    #[error("unknown basis element {0:?}")]
    UnknownBasisElement(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invariant `{invariant}` violated: {detail}")]
    InvariantViolated {
        invariant: &'static str,
        detail: String,
    },

    #[error("computed bounds contradict {theorem}: {detail}")]
    TheoremDiscrepancy { theorem: String, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolated {
            invariant,
            detail: detail.into(),
        }
    }
}
