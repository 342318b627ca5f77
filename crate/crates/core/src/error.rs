use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared across the library.
///
/// `BudgetExceeded` is kept separate from plain invalid-input errors so the
/// CLI can map "too big" and "bad input" to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    Zero,

    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("expected a nonnegative integer, got {0}")]
    Negative(BigInt),

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),

    #[error("factorization budget exceeded: {n} has {digits} digits (bound {bound})")]
    FactorBudget { n: BigInt, digits: usize, bound: usize },

    #[error("enumeration budget exceeded: |{0}| > {1}")]
    EnumBudget(BigInt, i64),

    #[error("{0} is a perfect square, not a quadratic field radicand")]
    SquareRadicand(BigInt),

    #[error("{0} is not a discriminant: not congruent to 0 or 1 mod 4")]
    BadDiscriminantResidue(BigInt),

    #[error("discriminant {0} is not fundamental (pass the form-class-number flag to accept orders)")]
    NotFundamental(BigInt),

    #[error("expected a negative discriminant, got {0}")]
    NotImaginary(BigInt),

    #[error("expected a positive discriminant, got {0}")]
    NotReal(BigInt),

    #[error("form ({0}, {1}, {2}) is imprimitive")]
    ImprimitiveForm(BigInt, BigInt, BigInt),

    #[error("forms have different discriminants: {0} vs {1}")]
    DiscriminantMismatch(BigInt, BigInt),

    #[error("cubic X^3 - {a}X - {b} is reducible")]
    ReducibleCubic { a: BigInt, b: BigInt },

    #[error("cubic X^3 - {a}X - {b} has square discriminant")]
    SquareCubicDiscriminant { a: BigInt, b: BigInt },

    #[error("cubic X^3 - {a}X - {b} violates the normalization hypothesis at p = {p}")]
    NotNormalized { a: BigInt, b: BigInt, p: BigInt },

    #[error("invalid k = {k}: {reason}")]
    InvalidK { k: BigInt, reason: String },

    #[error("invalid n = {n}: {reason}")]
    InvalidN { n: BigInt, reason: String },

    #[error("search bound {0} exhausted without finding a qualifying n")]
    SearchBound(u64),

    #[error("certificate check failed at {item}: {detail}")]
    CertificateCheck { item: String, detail: String },

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
