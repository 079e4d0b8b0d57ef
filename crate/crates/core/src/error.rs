use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime basis must be nonempty")]
    EmptyBasis,
    #[error("prime basis must be strictly increasing (at position {0})")]
    BasisNotIncreasing(usize),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} exceeds the deterministic primality certification bound")]
    PrimeTooLarge(BigInt),
    #[error("values belong to different prime bases")]
    BasisMismatch,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("zero raised to a non-positive power")]
    ZeroPower,
    #[error("polynomials live in different rings ({0} vs {1} variables)")]
    NvarsMismatch(usize, usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("weight matrix has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("valuation has no center: |X{0}| > 1")]
    NoCenter(usize),
    #[error("value exceeds one: the function is not in the valuation ring")]
    ValueExceedsOne,
    #[error("center does not lie in this chart: |g| > |h|")]
    CenterNotInChart,
    #[error("group closure exceeded {0} elements")]
    InfiniteGroup(usize),
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("group scalars must be nonzero")]
    ZeroScalar,
    #[error("valuation is not invariant under the group")]
    NotInvariant,
    #[error("function is not invariant under the group")]
    NotInvariantFunction,
    #[error("element is not fixed by the inversion Y1 -> 1/Y1")]
    NotSymmetric,
    #[error("residue field must have exactly one generator, found {0}")]
    NotRankOne(usize),
    #[error("exponent vector is not a top exponent of the denominator")]
    BadAnchor,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdent { offset: usize, name: String },
    #[error("invalid session: {0}")]
    Session(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Whether the error stems from malformed input rather than mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownIdent { .. } | Error::Session(_) | Error::Usage(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
