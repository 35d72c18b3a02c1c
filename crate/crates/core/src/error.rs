use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime or prime power")]
    NotPrime(u64),
    #[error("size bound exceeded: {0}")]
    SizeBoundExceeded(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("no embedding of GF({from}) into GF({to})")]
    NoEmbedding { from: String, to: String },
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("modulus must have positive degree")]
    ZeroModulus,
    #[error("polynomial must have positive degree")]
    DegreeZero,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("factor bound {bound} too small: cofactor of degree {residual} left")]
    BoundTooSmall { bound: usize, residual: usize },
    #[error("degenerate rational expression: {0}")]
    DegenerateResult(String),
    #[error("singular Moebius matrix")]
    SingularMap,
    #[error("polynomial degree must be even")]
    OddDegree,
    #[error("triple (a,b,c) has b^2-ac = 0")]
    SingularTriple,
    #[error("characteristic two requires a and c (or g1 and h1) not both zero")]
    Char2Degenerate,
    #[error("polynomial is not coprime with ax^2-2bx+c")]
    NotCoprime,
    #[error("polynomial is not invariant under the required substitution")]
    NotInvariant,
    #[error("missing value for divisor {0}")]
    MissingDivisorValue(u64),
    #[error("sigma must be nonzero")]
    ZeroSigma,
    #[error("this count requires n > 1")]
    RequiresNGreaterThan1,
    #[error("algebraic identity violated: {0}")]
    IdentityViolated(String),
    #[error("verification mismatch: {0}")]
    MismatchFound(String),
    #[error("degree must be a multiple of {0}")]
    DegreeNotMultiple(usize),
    #[error("operation unsupported in characteristic two")]
    Char2Unsupported,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
