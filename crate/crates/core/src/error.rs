use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the number-theory primitives, the domain types and the
/// constructors. Offending values are carried as decimal strings so the type
/// stays independent of the integer scalar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer square root of negative value {0}")]
    NegativeSqrt(String),
    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u32, got: String },
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("Euclid's formula needs m > n > 0 and k >= 1, got m={m}, n={n}, k={k}")]
    EuclidParameters { m: String, n: String, k: String },
    #[error("filling fraction needs positive numerator and denominator, got {p}/{q}")]
    InvalidFilling { p: String, q: String },
    #[error("cannot parse {0:?} as a filling fraction")]
    ParseFilling(String),
    #[error("charge vector entries must be nonnegative and not both zero, got ({t1}, {t2})")]
    InvalidCharge { t1: String, t2: String },
    #[error("K-matrix {0} is not a valid state (need m, n >= 1, l >= 0, mn - l^2 >= 1)")]
    InvalidState(String),
    #[error("K-matrix {kmatrix} gives nonpositive filling numerator {numerator}")]
    NonPositiveNumerator { kmatrix: String, numerator: String },
    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: String, q: String },
    #[error("neither {q} nor -{q} is a quadratic residue modulo {p}")]
    NoResidueWitness { p: String, q: String },
    #[error("parameter {name} out of range: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("expected charge vector {expected}, got {got}")]
    WrongCharge { expected: &'static str, got: String },
    #[error("expected an integer filling, got {0}")]
    NonIntegerFilling(String),
    #[error("{0} is not a perfect square")]
    NotPerfectSquare(String),
    #[error("solution {0} failed verification")]
    Unverified(String),
    #[error("cannot parse equation {0:?}: {1}")]
    ParseEquation(String, String),
}

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
