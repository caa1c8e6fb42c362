//! Orders of the fundamental unit modulo inert primes.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::ringarith::ResidueRing;
use crate::stats::constants::li;

/// Largest `y` (or `t`) accepted by the scans in this module.
pub const UNIT_SCAN_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HooleyRecord {
    pub q: u64,
    pub y: u64,
    pub count: u64,
    pub li_prediction: f64,
    pub ratio: f64,
}

fn require_real(k: &QuadraticField, what: &'static str) -> Result<()> {
    if k.is_real() {
        Ok(())
    } else {
        Err(Error::RealFieldRequired(what))
    }
}

/// Inert primes `p ≤ y` with `p ≡ −1 (mod q)` and `η^{(p+1)/q} ≡ 1 (mod p)`,
/// where `η = ε^s` is the norm-one generator. The prediction is
/// `Li(y) / (2q φ(q))`.
pub fn hooley_scan(k: &QuadraticField, q: u64, y: u64) -> Result<HooleyRecord> {
    require_real(k, "hooley_scan")?;
    if q == 2 || !arith::is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "q = {q} must be an odd prime"
        )));
    }
    if k.d() % q as i64 == 0 {
        return Err(Error::QDividesD { q, d: k.d() });
    }
    if y > UNIT_SCAN_BOUND {
        return Err(Error::bound("y", y, UNIT_SCAN_BOUND));
    }
    let eps = k.fundamental_unit()?;
    let s = eps.norm_one_exponent() as u64;
    let primes = arith::primes_up_to(y);
    let count = primes
        .par_iter()
        .filter(|&&p| k.chi(p) == -1 && (p + 1) % q == 0)
        .map(|&p| -> Result<u64> {
            let ring = ResidueRing::new(k, p)?;
            let eta = ring.pow(&ring.from_big(&eps.a, &eps.b), s)?;
            Ok((ring.pow(&eta, (p + 1) / q)? == ring.one()) as u64)
        })
        .sum::<Result<u64>>()?;
    let li_prediction = li(y as f64) / (2 * q * (q - 1)) as f64;
    Ok(HooleyRecord {
        q,
        y,
        count,
        li_prediction,
        ratio: if li_prediction > 0.0 {
            count as f64 / li_prediction
        } else {
            0.0
        },
    })
}

/// `#{inert p ≤ t : ℓ(p) ≤ y}`, iterating powers of `ε` for at most `y` steps.
pub fn small_order_count(k: &QuadraticField, t: u64, y: u64) -> Result<u64> {
    require_real(k, "small_order_count")?;
    if t > UNIT_SCAN_BOUND {
        return Err(Error::bound("t", t, UNIT_SCAN_BOUND));
    }
    let eps = k.fundamental_unit()?;
    arith::primes_up_to(t)
        .par_iter()
        .filter(|&&p| k.chi(p) == -1)
        .map(|&p| -> Result<u64> {
            let ring = ResidueRing::new(k, p)?;
            let e = ring.from_big(&eps.a, &eps.b);
            let mut x = e;
            for _ in 0..y {
                if x.is_rational() {
                    return Ok(1);
                }
                x = ring.mul(&x, &e)?;
            }
            Ok(0)
        })
        .sum()
}
