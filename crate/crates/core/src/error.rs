use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("polynomial has non-integer coefficients")]
    NonIntegerCoefficients,
    #[error("polynomial is reducible; factor {witness}")]
    Reducible { witness: String },
    #[error("degree {degree} exceeds the supported maximum {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("working precision cap of {cap} bits exceeded")]
    PrecisionCapExceeded { cap: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),
    #[error("polynomial is not squarefree modulo {0}")]
    NotSquarefree(u64),
    #[error("factors do not multiply to the polynomial modulo {0}")]
    FactorMismatch(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("prime {0} is unsupported (defining polynomial not squarefree modulo it)")]
    UnsupportedPrime(u64),
    #[error("prime {0} is too large for finite-place arithmetic")]
    PrimeTooLarge(String),
    #[error("element is zero")]
    ZeroElement,
    #[error("coordinate is not an S-integer")]
    NotSInteger,
    #[error("element does not lie in the image of the subfield")]
    EmbeddingUndefined,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("expanded coefficient does not lie in the ground field")]
    CoefficientNotInK,
    #[error("coefficient is not S-integral")]
    NotSIntegral,
    #[error("empty factor list")]
    EmptyFactorList,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear factor {0} vanishes at the point")]
    FactorVanishes(usize),
    #[error("polynomial has repeated roots")]
    RepeatedRoots,
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("polynomial value is zero")]
    ZeroValue,
    #[error("linear factors are not in general position (subset {0:?})")]
    GeneralPositionFailure(Vec<usize>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
