//! Reciprocal prime sums in arithmetic progressions.

use serde::Serialize;

use crate::arith::{self, gcd};
use crate::error::{Error, Result};

pub const NP_BOUND: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NpRecord {
    pub m: u64,
    pub a: u64,
    pub x: u64,
    pub sum: f64,
    pub prediction: f64,
    pub deviation: f64,
    /// `deviation · φ(m) / log 3m`, expected to stay bounded.
    pub normalized: f64,
}

/// `Σ_{m < p ≤ x, p ≡ a (mod m)} 1/p` against `log log x / φ(m)`.
pub fn np_diagnostic(m: u64, a: u64, x: u64) -> Result<NpRecord> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if gcd(a % m, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    if x > NP_BOUND {
        return Err(Error::bound("x", x, NP_BOUND));
    }
    let sum: f64 = arith::primes_up_to(x)
        .into_iter()
        .filter(|&p| p > m && p % m == a % m)
        .map(|p| 1.0 / p as f64)
        .sum();
    let phi = arith::euler_phi(m)? as f64;
    let prediction = (x.max(3) as f64).ln().ln() / phi;
    let deviation = sum - prediction;
    Ok(NpRecord {
        m,
        a,
        x,
        sum,
        prediction,
        deviation,
        normalized: deviation * phi / (3.0 * m as f64).ln(),
    })
}
