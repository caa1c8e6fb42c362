//! Crate-wide error type.
//!
//! Every variant renders with a stable `module: kind` prefix so that callers
//! (and the CLI) can grep for a failure class without parsing the details.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quadfield: not squarefree: D = {0}")]
    NotSquarefree(i64),
    #[error("quadfield: degenerate D: D = {0} (must not be 0 or 1)")]
    DegenerateD(i64),
    #[error("quadfield: not prime: {0}")]
    NotPrime(u64),
    #[error("quadfield: imaginary field: {0} requires a real quadratic field")]
    ImaginaryField(&'static str),
    #[error("bounds: bound exceeded: {what} = {value} > {limit}")]
    BoundExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("ringarith: modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("ringarith: modulus too large: f = {0} > 2^31")]
    ModulusTooLarge(u64),
    #[error("ringarith: ell search exceeded its cap of {0} steps")]
    EllSearchExhausted(u64),
    #[error("abelian: size cap exceeded: #G = {order} > {cap}")]
    SizeCapExceeded { order: u64, cap: u64 },
    #[error("abelian: invalid invariant factors: {0:?}")]
    InvalidInvariantFactors(Vec<u64>),
    #[error("classgroups: bad discriminant: {0}")]
    BadDiscriminant(i64),
    #[error("classgroups: discriminant mismatch: {0} vs {1}")]
    DiscMismatch(i64, i64),
    #[error("classgroups: real field: form class groups need an imaginary field")]
    RealField,
    #[error("elasticity: not split-free: f = {0}")]
    NotSplitFree(u64),
    #[error("elasticity: real field unsupported: irreducible search needs an imaginary field")]
    RealFieldUnsupported,
    #[error("arith: factorization bound exceeded: n = {0}")]
    FactorizationBoundExceeded(u64),
    #[error("stats: real field required for {0}")]
    RealFieldRequired(&'static str),
    #[error("stats: q divides D: q = {q}, D = {d}")]
    QDividesD { q: u64, d: i64 },
    #[error("stats: not coprime: gcd({a}, {m}) > 1")]
    NotCoprime { a: u64, m: u64 },
    #[error("stats: invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn bound(
        what: &'static str,
        value: impl Into<u128>,
        limit: impl Into<u128>,
    ) -> Self {
        Error::BoundExceeded {
            what,
            value: value.into(),
            limit: limit.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
