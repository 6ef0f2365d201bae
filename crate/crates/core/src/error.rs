use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be at least {min}, got {value}")]
    TooSmall {
        what: &'static str,
        value: u64,
        min: u64,
    },

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),

    #[error("empty congruence system")]
    EmptySystem,

    #[error("{a}·x ≡ {b} (mod {m}) has no solution")]
    Unsolvable { a: u64, b: u64, m: u64 },

    #[error("{a}·x ≡ {b} (mod {m}) holds for every x")]
    Unconstrained { a: u64, b: u64, m: u64 },

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("divisor set is empty")]
    EmptyDivisorSet,

    #[error("{d} does not divide {n}")]
    NotADivisor { n: u64, d: u64 },

    #[error("{d} is not a proper divisor of {n}")]
    ImproperDivisor { n: u64, d: u64 },

    #[error("divisor {0} listed more than once")]
    DuplicateDivisor(u64),

    #[error("{n} vertices exceeds the materialization cap of {cap}")]
    VertexCapExceeded { n: u64, cap: u64 },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u64, n: u64 },

    #[error("component count mismatch: gcd predicts {predicted}, union-find found {found}")]
    ComponentMismatch { predicted: u64, found: u64 },

    #[error("construction hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("{0} is not prime")]
    NotPrime(u64),
}
