use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("edge index {index} out of range (graph has {count} edges)")]
    InvalidEdgeIndex { index: usize, count: usize },

    #[error("operation requires a loopless graph")]
    LoopsPresent,

    #[error("operation requires a connected graph")]
    Disconnected,

    #[error("operation is undefined for forests (b1 = 0)")]
    ForestInput,

    #[error("parameter out of range: {0}")]
    ParamRange(String),

    #[error("{q} is not prime")]
    NotPrime { q: u64 },

    #[error("evaluation budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("need at least {needed} primes in the profile, got {got}")]
    TooFewPrimes { needed: usize, got: usize },

    #[error("counting profile is not polynomial: {0}")]
    NotPolynomial(NotPolynomialReason),

    #[error("exact division failed: {0}")]
    NonExactDivision(String),

    #[error("zero polynomial has no F1 point count")]
    ZeroPolynomial,

    #[error("system must be homogeneous for projective counting")]
    NotHomogeneous,

    #[error("hyperplane-section draws disagree: {0}")]
    SeedDisagreement(String),

    #[error("no polynomially countable slice found at depth {k} after {attempts} draws: {last}")]
    SliceNotCountable { k: usize, attempts: usize, last: String },

    #[error("unsupported graph shape for the blowup oracle")]
    UnsupportedShape,

    #[error("zero normal vector is not a hyperplane")]
    ZeroNormal,

    #[error("malformed input: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotPolynomialReason {
    /// Interpolation through the leading points produced non-integer
    /// coefficients.
    NonIntegerCoefficients,
    /// The interpolant misses a verification point.
    Mismatch { q: u64, expected: BigInt, got: BigInt },
}

impl std::fmt::Display for NotPolynomialReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotPolynomialReason::NonIntegerCoefficients => {
                write!(f, "non-integer interpolation coefficients")
            }
            NotPolynomialReason::Mismatch { q, expected, got } => {
                write!(f, "count at q={q} is {expected}, interpolant gives {got}")
            }
        }
    }
}
