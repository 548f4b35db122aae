use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation not supported over {0}")]
    UnsupportedField(&'static str),
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial is not a palindromial")]
    NotPalindromial,
    #[error("polynomial has odd degree")]
    OddDegree,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("modulus t-1 or t+1 does not define a tower")]
    DegenerateModulus,
    #[error("matrix is not square")]
    NonSquare,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices are not similar")]
    NotSimilar,
    #[error("subspace is not stable")]
    NotStable,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("form kind mismatch: {0}")]
    KindMismatch(String),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("wrong form kind for this operation")]
    WrongKind,
    #[error("isopairs have different eps")]
    EpsMismatch,
    #[error("size parity not admissible for this eps")]
    ParityMismatch,
    #[error("bad modulus for hermitian invariant")]
    BadModulus,
    #[error("isometry is not unipotent")]
    NotUnipotent,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("inadmissible shape: {0}")]
    InadmissibleShape(String),
    #[error("not splittable: failed {0:?}")]
    NotSplittable(Vec<String>),
    #[error("transport budget exceeded after {evaluated} candidates")]
    TransportBudgetExceeded { evaluated: u64 },
    #[error("isopairs are not isometric")]
    NotIsometric,
    #[error("matrix is not cyclic")]
    NotCyclic,
    #[error("constant terms do not match the determinant")]
    DeterminantMismatch,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
