//! Segmented sieve for integers free of primes that split in `K`.

use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;

/// Largest `x` accepted by [`sieve_split_free`].
pub const SIEVE_BOUND: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

/// Split-free integers in `[1, x]` as a bitset.
#[derive(Debug, Clone)]
pub struct SplitFreeSieve {
    x: u64,
    words: Vec<u64>,
    count: u64,
}

impl SplitFreeSieve {
    pub fn x(&self) -> u64 {
        self.x
    }

    /// `S_α(x)`.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.x && self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + bit)
            })
        })
    }

    /// Number of split-free `n ≤ y` for `y ≤ x`.
    pub fn count_up_to(&self, y: u64) -> u64 {
        let y = y.min(self.x);
        let full = (y / 64) as usize;
        let head: u64 = self.words[..full]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        let rem = y % 64;
        let mask = if rem == 63 {
            u64::MAX
        } else {
            (1u64 << (rem + 1)) - 1
        };
        let tail = self
            .words
            .get(full)
            .map_or(0, |w| (w & mask).count_ones() as u64);
        head + tail
    }
}

/// Sieves `[1, x]` by the primes `p ≤ x` with `χ(p) = 1`.
pub fn sieve_split_free(k: &QuadraticField, x: u64) -> Result<SplitFreeSieve> {
    if x > SIEVE_BOUND {
        return Err(Error::bound("x", x, SIEVE_BOUND));
    }
    let split: Vec<u64> = arith::primes_up_to(x)
        .into_iter()
        .filter(|&p| k.chi(p) == 1)
        .collect();
    let segments = x / SEGMENT + 1;
    let words: Vec<u64> = (0..segments)
        .into_par_iter()
        .flat_map_iter(|s| {
            let lo = s * SEGMENT;
            let hi = (lo + SEGMENT).min(x + 1);
            let mut seg = vec![u64::MAX; (SEGMENT / 64) as usize];
            for &p in &split {
                if p >= hi {
                    break;
                }
                let mut m = lo.div_ceil(p) * p;
                while m < hi {
                    let off = m - lo;
                    seg[(off / 64) as usize] &= !(1u64 << (off % 64));
                    m += p;
                }
            }
            // clear 0 and everything above x
            if lo == 0 {
                seg[0] &= !1;
            }
            for off in hi - lo..SEGMENT {
                seg[(off / 64) as usize] &= !(1u64 << (off % 64));
            }
            let used = (hi - lo).div_ceil(64) as usize;
            seg.truncate(used.max(1));
            seg
        })
        .collect();
    let count = words.iter().map(|w| w.count_ones() as u64).sum();
    Ok(SplitFreeSieve { x, words, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let gi = QuadraticField::new(-1).unwrap();
        let s = sieve_split_free(&gi, 10).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 2, 3, 4, 6, 7, 8, 9]);
        assert_eq!(s.count(), 8);
        let s = sieve_split_free(&gi, 1).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1]);
        let r2 = QuadraticField::new(2).unwrap();
        let s = sieve_split_free(&r2, 10).unwrap();
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10]
        );
        assert!(sieve_split_free(&gi, SIEVE_BOUND + 1).is_err());
    }

    #[test]
    fn matches_trial_division() {
        for d in [-1, -3, -5, 2, 5, 13] {
            let k = QuadraticField::new(d).unwrap();
            let x = 10_000;
            let s = sieve_split_free(&k, x).unwrap();
            let mut count = 0;
            for n in 1..=x {
                let sf = k.is_split_free(n).unwrap();
                assert_eq!(s.contains(n), sf, "D={d} n={n}");
                count += sf as u64;
                assert_eq!(s.count_up_to(n), count);
            }
            assert_eq!(s.count(), count);
        }
    }

    #[test]
    fn crosses_segment_boundaries() {
        let k = QuadraticField::new(-1).unwrap();
        let x = 3 * SEGMENT + 17;
        let s = sieve_split_free(&k, x).unwrap();
        for n in [SEGMENT - 1, SEGMENT, SEGMENT + 1, 2 * SEGMENT, x - 1, x] {
            assert_eq!(s.contains(n), k.is_split_free(n).unwrap(), "n={n}");
        }
        assert!(!s.contains(x + 1));
        assert_eq!(s.iter().count() as u64, s.count());
    }
}
