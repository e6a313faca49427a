use thiserror::Error;

/// Errors reported by the toolkit. Input validation failures carry the
/// offending value so callers can surface it verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{value} is not congruent to 1 mod {p}")]
    NotTame { value: u64, p: u64 },

    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: u64, m: u64 },

    #[error("{g}^x = {r} mod {s} has no solution; {g} is not a primitive root mod {s}")]
    NoDiscreteLog { g: u64, r: u64, s: u64 },

    #[error("{root} is not a primitive root mod {prime}")]
    NotPrimitiveRoot { root: u64, prime: u64 },

    #[error("duplicate prime {0} in set")]
    DuplicatePrime(u64),

    #[error("prime set is empty")]
    EmptySet,

    #[error("{0} is not a member of the set")]
    NotAMember(u64),

    #[error("linking number is undefined for a prime paired with itself ({0})")]
    SelfPair(u64),

    #[error("ordering is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("target subset is empty")]
    EmptyTarget,

    #[error("conflicting constraints for prime {other} ({direction})")]
    ConflictingConstraints { other: u64, direction: String },

    #[error(
        "cannot parse constraint {0:?}: expected q->PRIME or PRIME->q, optionally prefixed with !"
    )]
    ConstraintSyntax(String),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("circuit size must be even and at least 4, got {0}")]
    InvalidCircuitSize(usize),

    #[error("certificate is malformed: {0}")]
    MalformedCertificate(String),

    #[error("certificate did not verify: {0}")]
    CertificateRejected(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
