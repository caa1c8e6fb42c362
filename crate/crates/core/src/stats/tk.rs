//! Weighted Turán–Kubilius statistics over split-free integers.
//!
//! With `α` the indicator of split-free integers (`σ = 1`, `κ = 1/2`):
//!
//! - `A = Σ_{p^k ≤ x, χ(p) ≠ 1} (1 − 1/p) f(p^k) / p^k`
//! - `B = Σ_{p^k ≤ x, χ(p) ≠ 1} f(p^k)² / p^k · (1 − log p^k / log 3x)^{−1/2}`
//! - the empirical side is `S_α(x)⁻¹ Σ_{n ≤ x split-free} |f(n) − A|²`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::SpfTable;
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::stats::sieve::sieve_split_free;

/// Largest `x` accepted by [`tk_report`].
pub const TK_BOUND: u64 = 10_000_000;

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TkFunction {
    /// `f(p^k) = k`, i.e. `Ω` on split-free integers.
    OmegaRestricted,
    /// `f(p^k) = 1`.
    SmallOmega,
    /// `h(n) = Σ_{q ≤ y log y} v_q(ψ(n)) log q` with `y = log log x`.
    CutoffH,
    /// `f ≡ 0`.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TkReport {
    pub x: u64,
    pub function: TkFunction,
    pub sigma: f64,
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub empirical_lhs: f64,
    pub ratio: f64,
    pub split_free_count: u64,
    /// Prime bound `y log y` used by `CutoffH`, after clamping to at least 2.
    pub cutoff_q: Option<f64>,
}

/// `y log y` with `y = log log x`, clamped below at 2.
pub fn h_cutoff(x: u64) -> f64 {
    let y = (x.max(3) as f64).ln().ln();
    (y * y.ln()).max(2.0)
}

struct Additive<'a> {
    k: &'a QuadraticField,
    spf: &'a SpfTable,
    function: TkFunction,
    cutoff: f64,
}

impl Additive<'_> {
    fn at_prime_power(&self, p: u64, e: u32) -> f64 {
        match self.function {
            TkFunction::OmegaRestricted => e as f64,
            TkFunction::SmallOmega => 1.0,
            TkFunction::Zero => 0.0,
            TkFunction::CutoffH => {
                // ψ(p^e) = p^{e−1} (p − χ(p))
                let mut total = 0.0;
                if e > 1 && (p as f64) <= self.cutoff {
                    total += (e - 1) as f64 * (p as f64).ln();
                }
                let m = (p as i64 - self.k.chi(p) as i64) as u64;
                for (q, v) in self.spf.factor(m).expect("within table") {
                    if (q as f64) <= self.cutoff {
                        total += v as f64 * (q as f64).ln();
                    }
                }
                total
            }
        }
    }

    fn at(&self, n: u64) -> f64 {
        self.spf
            .factor(n)
            .expect("within table")
            .into_iter()
            .map(|(p, e)| self.at_prime_power(p, e))
            .sum()
    }
}

pub fn tk_report(k: &QuadraticField, x: u64, function: TkFunction) -> Result<TkReport> {
    if x > TK_BOUND {
        return Err(Error::bound("x", x, TK_BOUND));
    }
    if x == 0 {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let spf = SpfTable::new(x + 2)?;
    let cutoff = h_cutoff(x);
    let add = Additive {
        k,
        spf: &spf,
        function,
        cutoff,
    };
    let log3x = (3.0 * x as f64).ln();
    let (mut a, mut b) = (0.0, 0.0);
    for &p in spf.primes() {
        let p = p as u64;
        if p > x {
            break;
        }
        if k.chi(p) == 1 {
            continue;
        }
        let (mut pk, mut e) = (p, 1u32);
        loop {
            let fv = add.at_prime_power(p, e);
            let pkf = pk as f64;
            a += (1.0 - 1.0 / p as f64) * fv / pkf;
            b += fv * fv / pkf * (1.0 - pkf.ln() / log3x).powf(-0.5);
            match pk.checked_mul(p) {
                Some(next) if next <= x => {
                    pk = next;
                    e += 1;
                }
                _ => break,
            }
        }
    }
    let sieve = sieve_split_free(k, x)?;
    let ns: Vec<u64> = sieve.iter().collect();
    // fixed chunking keeps the floating-point sum independent of thread count
    let partial: Vec<f64> = ns
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(|&n| (add.at(n) - a).powi(2)).sum())
        .collect();
    let count = sieve.count();
    let empirical_lhs = partial.iter().sum::<f64>() / count as f64;
    Ok(TkReport {
        x,
        function,
        sigma: 1.0,
        kappa: 0.5,
        a,
        b,
        empirical_lhs,
        ratio: if b > 0.0 { empirical_lhs / b } else { 0.0 },
        split_free_count: count,
        cutoff_q: (function == TkFunction::CutoffH).then_some(cutoff),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_sums() {
        let gi = QuadraticField::new(-1).unwrap();
        let r = tk_report(&gi, 10, TkFunction::OmegaRestricted).unwrap();
        let want = 0.5 / 2.0
            + 0.5 * 2.0 / 4.0
            + 0.5 * 3.0 / 8.0
            + (2.0 / 3.0) / 3.0
            + (2.0 / 3.0) * 2.0 / 9.0
            + (6.0 / 7.0) / 7.0;
        assert!((r.a - want).abs() < 1e-12);
        assert!((r.a - 1.1803).abs() < 1e-4);
        let r = tk_report(&gi, 2, TkFunction::OmegaRestricted).unwrap();
        assert!((r.a - 0.25).abs() < 1e-15);
        let r = tk_report(&gi, 1000, TkFunction::Zero).unwrap();
        assert_eq!((r.a, r.b, r.empirical_lhs), (0.0, 0.0, 0.0));
    }

    #[test]
    fn empirical_side_matches_direct_sum() {
        let gi = QuadraticField::new(-1).unwrap();
        let r = tk_report(&gi, 10, TkFunction::SmallOmega).unwrap();
        // ω over {1,2,3,4,6,7,8,9} is 0,1,1,1,2,1,1,1
        let vals = [0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0];
        let want = vals.iter().map(|v: &f64| (v - r.a).powi(2)).sum::<f64>() / 8.0;
        assert!((r.empirical_lhs - want).abs() < 1e-12);
    }

    #[test]
    fn cutoff_h_counts_small_primes_of_psi() {
        // x = 10^6: y = log log x ≈ 2.63, y log y ≈ 2.54, so only q = 2 counts
        let gi = QuadraticField::new(-1).unwrap();
        let spf = SpfTable::new(100).unwrap();
        let add = Additive {
            k: &gi,
            spf: &spf,
            function: TkFunction::CutoffH,
            cutoff: h_cutoff(1_000_000),
        };
        // ψ(3) = 4, ψ(9) = 12, ψ(2) = 2, ψ(7) = 8
        let l2 = 2f64.ln();
        assert!((add.at(3) - 2.0 * l2).abs() < 1e-12);
        assert!((add.at(9) - 2.0 * l2).abs() < 1e-12);
        assert!((add.at(14) - 4.0 * l2).abs() < 1e-12);
    }
}
