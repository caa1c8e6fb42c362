//! Elementary integer arithmetic: gcd/lcm, modular helpers, the Kronecker
//! symbol, primality, factorization and smallest-prime-factor tables.

use crate::error::{Error, Result};

/// Largest integer we agree to factor.
pub const FACTOR_BOUND: u64 = 1 << 62;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Least nonnegative residue of a signed integer.
pub fn reduce_signed(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Kronecker symbol `(a / n)` by quadratic reciprocity.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut sign: i8 = 1;
    // strip factors of two from n
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
            sign = -sign;
        }
        n >>= v;
    }
    // n is odd and positive: this is now a Jacobi symbol
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64, seed: u64) -> u64 {
    // Brent's variant with a fixed increment per seed, so results are reproducible.
    let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
    let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
    let mut steps = 0u64;
    while d == 1 {
        x = f(x);
        y = f(f(y));
        d = gcd(x.abs_diff(y), n);
        steps += 1;
        if steps > 1 << 22 {
            return n;
        }
    }
    d
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut seed = 1;
    loop {
        let d = pollard_rho(n, seed);
        if d != n && d != 1 {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
        seed += 1;
    }
}

/// Prime factorization as ascending `(p, k)` pairs. `factor(1)` is empty.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 || n > FACTOR_BOUND {
        return Err(Error::FactorizationBoundExceeded(n));
    }
    let mut n = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut p = 53u64;
    while p * p <= n && p < 1 << 12 {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    Ok(group_primes(&primes))
}

fn group_primes(sorted: &[u64]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &p in sorted {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Number of prime factors counted with multiplicity.
pub fn omega_big(n: u64) -> Result<u32> {
    Ok(factor(n)?.iter().map(|&(_, k)| k).sum())
}

/// Product of the distinct primes dividing `n`.
pub fn rad(n: u64) -> Result<u64> {
    Ok(factor(n)?.iter().map(|&(p, _)| p).product())
}

/// Product of the prime powers `p^k || n` with `p <= z`.
pub fn smooth_part(n: u64, z: f64) -> Result<u64> {
    Ok(factor(n)?
        .iter()
        .filter(|&&(p, _)| (p as f64) <= z)
        .map(|&(p, k)| p.pow(k))
        .product())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factor(n)?
        .iter()
        .map(|&(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0
        && factor(n)
            .map(|f| f.iter().all(|&(_, k)| k == 1))
            .unwrap_or(false)
}

/// All positive divisors of a factored integer, ascending.
pub fn divisors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, k) in factors {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table built by a linear sieve.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfTable {
    /// Table covering `0..=limit`. Limited to 10^8 entries.
    pub fn new(limit: u64) -> Result<Self> {
        const MAX: u64 = 100_000_000;
        if limit > MAX {
            return Err(Error::bound("spf table limit", limit, MAX));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit() && self.spf[n as usize] as u64 == n
    }

    /// Factorization; falls back to [`factor`] above the table limit.
    pub fn factor(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 0 || n > self.limit() {
            return factor(n);
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut n = n as usize;
        while n > 1 {
            let p = self.spf[n] as u64;
            n /= p as usize;
            match out.last_mut() {
                Some((q, k)) if *q == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_by_squares(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_square_enumeration_for_odd_primes() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in -50i64..50 {
                assert_eq!(kronecker(a, p), legendre_by_squares(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        // (a/2) = 0 for even a, 1 for a = ±1 mod 8, -1 for a = ±3 mod 8
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn factor_small_and_large() {
        assert_eq!(factor(1).unwrap(), vec![]);
        assert_eq!(factor(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(
            factor(big).unwrap(),
            vec![(998_244_353, 1), (1_000_000_007, 1)]
        );
        assert!(factor(0).is_err());
    }

    #[test]
    fn omega_rad_smooth() {
        assert_eq!(omega_big(30).unwrap(), 3);
        assert_eq!(omega_big(27).unwrap(), 3);
        assert_eq!(omega_big(1).unwrap(), 0);
        assert_eq!(omega_big(8).unwrap(), 3);
        assert_eq!(rad(12).unwrap(), 6);
        assert_eq!(rad(1).unwrap(), 1);
        assert_eq!(smooth_part(40, 3.0).unwrap(), 8);
        assert_eq!(smooth_part(1, 7.5).unwrap(), 1);
    }

    #[test]
    fn spf_table_agrees_with_trial_division() {
        let t = SpfTable::new(20_000).unwrap();
        for n in 1..=20_000u64 {
            assert_eq!(t.factor(n).unwrap(), factor(n).unwrap());
        }
        assert_eq!(t.primes().len(), primes_up_to(20_000).len());
    }

    #[test]
    fn inverse_and_sqrt() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        assert!(is_square(144) && !is_square(145));
    }
}
