use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= p < 2^62)")]
    ModulusOutOfRange(u64),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("shift length {found} does not match expected length {expected}")]
    ShiftLength { expected: usize, found: usize },
    #[error("reversal window too small")]
    ReversalWindow,
    #[error("leading matrix undefined for zero rows")]
    ZeroRow,
    #[error("column index set invalid: {0}")]
    BadColumnSet(String),
    #[error("order entries must be positive")]
    BadOrder,
    #[error("degree bound must be positive")]
    BadDegreeBound,
    #[error("input not weak Popov")]
    NotWeakPopov,
    #[error("matrix is singular")]
    Singular,
    #[error("constant term singular")]
    ConstantTermSingular,
    #[error("B is not a left multiple of A")]
    NotLeftMultiple,
    #[error("unsupported shape: more rows than columns")]
    UnsupportedShape,
    #[error("input not full rank")]
    NotFullRank,
    #[error("pivot support incorrect")]
    PivotSupportIncorrect,
    #[error("random completion failed after {0} attempts")]
    CompletionExhausted(usize),
    #[error("internal verification failure: {0}")]
    InternalCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
