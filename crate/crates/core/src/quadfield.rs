//! The fixed quadratic field `K = Q(√D)`: discriminant, character, splitting
//! of rational primes, fundamental unit, class number and `L(1, χ)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, gcd, isqrt, kronecker};
use crate::classgroups;
use crate::error::{Error, Result};

/// Default bound on `|Δ|` for exact class number computation.
pub const CLASS_NUMBER_BOUND: u64 = 1_000_000;

/// Which integral basis element generates `O_K` over `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    /// `ω = √D`, used when `D ≡ 2, 3 (mod 4)`.
    SqrtD,
    /// `ω = (1 + √D)/2`, used when `D ≡ 1 (mod 4)`.
    HalfOnePlusSqrtD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// Fundamental unit `ε > 1`.
///
/// `ε = (u + v√D)/2` when `D ≡ 1 (mod 4)`, otherwise `ε = u + v√D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub u: BigInt,
    pub v: BigInt,
    pub norm: i8,
    /// Coefficients of `ε = a + bω` in the integral basis.
    pub a: BigInt,
    pub b: BigInt,
}

impl FundamentalUnit {
    /// `s = 1` if `Nm ε = 1`, else `2`; `η = ε^s` has norm one.
    pub fn norm_one_exponent(&self) -> u32 {
        if self.norm == 1 {
            1
        } else {
            2
        }
    }
}

#[derive(Debug)]
pub struct QuadraticField {
    d: i64,
    delta: i64,
    omega: OmegaKind,
    unit: OnceLock<Option<FundamentalUnit>>,
}

impl Clone for QuadraticField {
    fn clone(&self) -> Self {
        let unit = OnceLock::new();
        if let Some(u) = self.unit.get() {
            let _ = unit.set(u.clone());
        }
        Self {
            d: self.d,
            delta: self.delta,
            omega: self.omega,
            unit,
        }
    }
}

impl PartialEq for QuadraticField {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for QuadraticField {}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

impl QuadraticField {
    /// Builds `Q(√D)` for squarefree `D ∉ {0, 1}`.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateD(d));
        }
        if d != -1 && !arith::is_squarefree(d.unsigned_abs()) {
            return Err(Error::NotSquarefree(d));
        }
        let (delta, omega) = if d.rem_euclid(4) == 1 {
            (d, OmegaKind::HalfOnePlusSqrtD)
        } else {
            (4 * d, OmegaKind::SqrtD)
        };
        Ok(Self {
            d,
            delta,
            omega,
            unit: OnceLock::new(),
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// Number of roots of unity in `K`.
    pub fn torsion_count(&self) -> u32 {
        match self.delta {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// Trace and norm of `ω`: `ω² = tr·ω − nm`.
    pub fn omega_trace_norm(&self) -> (i64, i64) {
        match self.omega {
            OmegaKind::SqrtD => (0, -self.d),
            OmegaKind::HalfOnePlusSqrtD => (1, (1 - self.d) / 4),
        }
    }

    /// Norm of `a + bω`.
    pub fn norm(&self, a: i128, b: i128) -> i128 {
        let (tr, nm) = self.omega_trace_norm();
        a * a + (tr as i128) * a * b + (nm as i128) * b * b
    }

    /// Kronecker character `χ(n) = (Δ/n)`.
    pub fn chi(&self, n: u64) -> i8 {
        kronecker(self.delta, n)
    }

    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(match self.chi(p) {
            1 => SplittingType::Split,
            -1 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        })
    }

    /// `f` is split-free when no prime factor of `f` splits in `K`.
    pub fn is_split_free(&self, f: u64) -> Result<bool> {
        Ok(arith::factor(f)?.iter().all(|&(p, _)| self.chi(p) != 1))
    }

    /// The least unit `ε > 1` of `O_K`, from the continued fraction of `ω`.
    pub fn fundamental_unit(&self) -> Result<&FundamentalUnit> {
        if !self.is_real() {
            return Err(Error::ImaginaryField("fundamental_unit"));
        }
        Ok(self
            .unit
            .get_or_init(|| Some(compute_fundamental_unit(self)))
            .as_ref()
            .expect("real field always has a unit"))
    }

    /// `log ε` in double precision.
    pub fn log_fundamental_unit(&self) -> Result<f64> {
        let eps = self.fundamental_unit()?;
        let (tr_w, _) = self.omega_trace_norm();
        let trace: BigInt = &eps.a * 2 + &eps.b * tr_w;
        let ln_t = ln_big(&trace);
        let t = trace.to_f64().unwrap_or(f64::INFINITY);
        let ratio = if t.is_finite() {
            4.0 * eps.norm as f64 / (t * t)
        } else {
            0.0
        };
        Ok(ln_t + ((1.0 + (1.0 - ratio).sqrt()) / 2.0).ln())
    }

    pub fn class_number(&self) -> Result<u64> {
        self.class_number_with_bound(CLASS_NUMBER_BOUND)
    }

    /// Exact class number: reduced forms when imaginary, cycles of reduced
    /// indefinite forms when real.
    pub fn class_number_with_bound(&self, bound: u64) -> Result<u64> {
        let abs = self.delta.unsigned_abs();
        if abs > bound {
            return Err(Error::bound("|delta|", abs, bound));
        }
        if self.is_real() {
            let narrow = indefinite_cycle_count(self.delta);
            let eps = self.fundamental_unit()?;
            Ok(if eps.norm == 1 { narrow / 2 } else { narrow })
        } else {
            Ok(classgroups::reduced_forms(self.delta)?.len() as u64)
        }
    }

    /// `L(1, χ)` from the class number formula.
    pub fn l_one_chi(&self) -> Result<f64> {
        let h = self.class_number()? as f64;
        let abs = self.delta.unsigned_abs() as f64;
        if self.is_real() {
            Ok(2.0 * h * self.log_fundamental_unit()? / abs.sqrt())
        } else {
            Ok(2.0 * PI * h / (self.torsion_count() as f64 * abs.sqrt()))
        }
    }

    /// Unique factorization of `Δ` into prime discriminants.
    ///
    /// The 2-part (one of `-4, 8, -8`) comes first, then the odd prime
    /// discriminants `(-1)^((p-1)/2) p` in increasing `p`.
    pub fn delta_factorization(&self) -> Vec<i64> {
        delta_factorization(self.delta)
    }

    /// Whether `Δ` is itself a single prime discriminant.
    pub fn delta_is_prime_discriminant(&self) -> bool {
        self.delta_factorization().len() == 1
    }
}

pub fn delta_factorization(delta: i64) -> Vec<i64> {
    let abs = delta.unsigned_abs();
    let mut odd: Vec<i64> = Vec::new();
    let mut odd_product: i64 = 1;
    for (p, _) in arith::factor(abs).unwrap_or_default() {
        if p == 2 {
            continue;
        }
        let signed = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        odd_product *= signed;
        odd.push(signed);
    }
    let mut out = Vec::with_capacity(odd.len() + 1);
    let two_part = delta / odd_product;
    if two_part != 1 {
        out.push(two_part);
    }
    out.extend(odd);
    out
}

/// Membership in the set of prime discriminants `{-4, ±8} ∪ {p*}`.
pub fn is_prime_discriminant(n: i64) -> bool {
    match n {
        -4 | 8 | -8 => true,
        _ => {
            let p = n.unsigned_abs();
            p > 2 && arith::is_prime(p) && (if p % 4 == 1 { n > 0 } else { n < 0 })
        }
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("positive").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

fn compute_fundamental_unit(k: &QuadraticField) -> FundamentalUnit {
    let d = k.d as i128;
    let s = isqrt(k.d as u64) as i128;
    let (tr_w, nm_w) = k.omega_trace_norm();
    // ω = (P + √D)/Q with Q | D − P²
    let (mut p_cf, mut q_cf) = match k.omega {
        OmegaKind::SqrtD => (0i128, 1i128),
        OmegaKind::HalfOnePlusSqrtD => (1i128, 2i128),
    };
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    loop {
        debug_assert!(q_cf > 0);
        let a = (p_cf + s).div_euclid(q_cf);
        let p_next = &p_cur * a + &p_prev;
        let q_next = &q_cur * a + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        // p − qω is tiny; its conjugate p − qω̄ is the unit candidate
        let nm: BigInt = &p_cur * &p_cur - &p_cur * &q_cur * tr_w + &q_cur * &q_cur * nm_w;
        if nm.abs().is_one() {
            let norm = if nm.is_positive() { 1 } else { -1 };
            // ω̄ = tr − ω, so p − qω̄ = (p − q·tr) + qω
            let a_coef: BigInt = &p_cur - &q_cur * tr_w;
            let b_coef = q_cur.clone();
            let (u, v) = match k.omega {
                OmegaKind::SqrtD => (a_coef.clone(), b_coef.clone()),
                OmegaKind::HalfOnePlusSqrtD => (&a_coef * 2 + &b_coef, b_coef.clone()),
            };
            return FundamentalUnit {
                u,
                v,
                norm,
                a: a_coef,
                b: b_coef,
            };
        }
        let p_new = a * q_cf - p_cf;
        q_cf = (d - p_new * p_new) / q_cf;
        p_cf = p_new;
    }
}

/// Reduced primitive indefinite forms of discriminant `delta > 0`.
///
/// Reduced means `0 < b < √Δ` and `√Δ − b < 2|a| < √Δ + b`.
pub fn reduced_indefinite_forms(delta: i64) -> Vec<(i64, i64, i64)> {
    let s = isqrt(delta as u64) as i64;
    let mut forms = Vec::new();
    for b in 1..=s {
        if (b - delta).rem_euclid(2) != 0 {
            continue;
        }
        let ac = (b * b - delta) / 4;
        if ac == 0 {
            continue;
        }
        let n = ac.unsigned_abs();
        for dv in arith::divisors(&arith::factor(n).unwrap_or_default()) {
            let abs_a = dv as i64;
            if 2 * abs_a - b > s || 2 * abs_a + b < s + 1 {
                continue;
            }
            for a in [abs_a, -abs_a] {
                let c = ac / a;
                if gcd(gcd(abs_a as u64, b as u64), c.unsigned_abs()) == 1 {
                    forms.push((a, b, c));
                }
            }
        }
    }
    forms.sort_unstable();
    forms
}

fn rho_indefinite(form: (i64, i64, i64), delta: i64, s: i64) -> (i64, i64, i64) {
    let (_, b, c) = form;
    let m = 2 * c.abs();
    let lo = s + 1 - m;
    let b2 = lo + (-b - lo).rem_euclid(m);
    let c2 = (b2 * b2 - delta) / (4 * c);
    (c, b2, c2)
}

/// Number of proper equivalence classes (the narrow class number).
pub fn indefinite_cycle_count(delta: i64) -> u64 {
    let forms = reduced_indefinite_forms(delta);
    let s = isqrt(delta as u64) as i64;
    let index: std::collections::HashMap<_, _> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut cur = forms[start];
        loop {
            let i = index[&cur];
            if seen[i] {
                break;
            }
            seen[i] = true;
            cur = rho_indefinite(cur, delta, s);
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_field_examples() {
        let k = QuadraticField::new(-1).unwrap();
        assert_eq!(
            (k.delta(), k.torsion_count(), k.omega_kind()),
            (-4, 4, OmegaKind::SqrtD)
        );
        let k = QuadraticField::new(-3).unwrap();
        assert_eq!(
            (k.delta(), k.torsion_count(), k.omega_kind()),
            (-3, 6, OmegaKind::HalfOnePlusSqrtD)
        );
        let k = QuadraticField::new(2).unwrap();
        assert_eq!((k.delta(), k.torsion_count(), k.is_real()), (8, 2, true));
        assert_eq!(QuadraticField::new(4), Err(Error::NotSquarefree(4)));
        assert_eq!(QuadraticField::new(-12), Err(Error::NotSquarefree(-12)));
        assert_eq!(QuadraticField::new(0), Err(Error::DegenerateD(0)));
        assert_eq!(QuadraticField::new(1), Err(Error::DegenerateD(1)));
    }

    #[test]
    fn chi_examples() {
        let gi = QuadraticField::new(-1).unwrap();
        assert_eq!(gi.chi(5), 1);
        let r2 = QuadraticField::new(2).unwrap();
        assert_eq!(r2.chi(2), 0);
        assert_eq!(r2.chi(5), -1);
    }

    #[test]
    fn splitting_examples() {
        let gi = QuadraticField::new(-1).unwrap();
        assert_eq!(gi.splitting_type(5).unwrap(), SplittingType::Split);
        let r2 = QuadraticField::new(2).unwrap();
        assert_eq!(r2.splitting_type(7).unwrap(), SplittingType::Split);
        let e = QuadraticField::new(-3).unwrap();
        assert_eq!(e.splitting_type(3).unwrap(), SplittingType::Ramified);
        assert_eq!(e.splitting_type(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn fundamental_unit_examples() {
        let u = QuadraticField::new(2)
            .unwrap()
            .fundamental_unit()
            .unwrap()
            .clone();
        assert_eq!((u.u, u.v, u.norm), (BigInt::from(1), BigInt::from(1), -1));
        let u = QuadraticField::new(5)
            .unwrap()
            .fundamental_unit()
            .unwrap()
            .clone();
        assert_eq!((u.u, u.v, u.norm), (BigInt::from(1), BigInt::from(1), -1));
        let u = QuadraticField::new(3)
            .unwrap()
            .fundamental_unit()
            .unwrap()
            .clone();
        assert_eq!((u.u, u.v, u.norm), (BigInt::from(2), BigInt::from(1), 1));
        // (39 + 5√61)/2, norm -1
        let u = QuadraticField::new(61)
            .unwrap()
            .fundamental_unit()
            .unwrap()
            .clone();
        assert_eq!((u.u, u.v, u.norm), (BigInt::from(39), BigInt::from(5), -1));
        assert!(matches!(
            QuadraticField::new(-2).unwrap().fundamental_unit(),
            Err(Error::ImaginaryField(_))
        ));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(QuadraticField::new(-1).unwrap().class_number().unwrap(), 1);
        assert_eq!(QuadraticField::new(-5).unwrap().class_number().unwrap(), 2);
        assert_eq!(QuadraticField::new(2).unwrap().class_number().unwrap(), 1);
        assert_eq!(QuadraticField::new(3).unwrap().class_number().unwrap(), 1);
        assert_eq!(QuadraticField::new(10).unwrap().class_number().unwrap(), 2);
        assert_eq!(QuadraticField::new(79).unwrap().class_number().unwrap(), 3);
        assert_eq!(QuadraticField::new(-23).unwrap().class_number().unwrap(), 3);
        let big = QuadraticField::new(-1_000_003).unwrap();
        assert!(matches!(
            big.class_number(),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn l_one_chi_examples() {
        let v = QuadraticField::new(-1).unwrap().l_one_chi().unwrap();
        assert!((v - PI / 4.0).abs() < 1e-12);
        let v = QuadraticField::new(2).unwrap().l_one_chi().unwrap();
        assert!((v - 2.0 * (1.0 + 2f64.sqrt()).ln() / 8f64.sqrt()).abs() < 1e-12);
        assert!((v - 0.623225).abs() < 1e-6);
        let v = QuadraticField::new(-3).unwrap().l_one_chi().unwrap();
        assert!((v - 0.604600).abs() < 1e-6);
    }

    #[test]
    fn delta_factorization_examples() {
        assert_eq!(delta_factorization(-4), vec![-4]);
        assert_eq!(delta_factorization(-24), vec![8, -3]);
        assert_eq!(delta_factorization(21), vec![-3, -7]);
        assert_eq!(delta_factorization(-3), vec![-3]);
        assert_eq!(delta_factorization(5), vec![5]);
        assert_eq!(delta_factorization(-20), vec![-4, 5]);
    }

    fn squarefree_d() -> impl Strategy<Value = i64> {
        (-3000i64..3000).prop_filter("squarefree, not 0 or 1", |&d| {
            d != 0 && d != 1 && arith::is_squarefree(d.unsigned_abs())
        })
    }

    proptest! {
        #[test]
        fn chi_is_completely_multiplicative(d in squarefree_d(), m in 1u64..10_000, n in 1u64..10_000) {
            let k = QuadraticField::new(d).unwrap();
            prop_assert_eq!(k.chi(m * n), k.chi(m) * k.chi(n));
        }

        #[test]
        fn splitting_matches_square_roots_mod_4p(d in squarefree_d(), i in 0usize..168) {
            let k = QuadraticField::new(d).unwrap();
            let p = arith::primes_up_to(1000)[i];
            let m = 4 * p as i64;
            let target = k.delta().rem_euclid(m);
            let roots = (0..m).filter(|x| (x * x).rem_euclid(m) == target).count();
            let expected = match k.splitting_type(p).unwrap() {
                SplittingType::Split => roots > 0 && k.delta() % p as i64 != 0,
                SplittingType::Ramified => k.delta() % p as i64 == 0,
                SplittingType::Inert => roots == 0,
            };
            prop_assert!(expected, "D = {}, p = {}, roots = {}", d, p, roots);
        }

        #[test]
        fn delta_factors_are_prime_discriminants(d in squarefree_d()) {
            let k = QuadraticField::new(d).unwrap();
            let parts = k.delta_factorization();
            prop_assert_eq!(parts.iter().product::<i64>(), k.delta());
            for q in parts {
                prop_assert!(is_prime_discriminant(q), "{} is not a prime discriminant", q);
            }
        }
    }

    #[test]
    fn l_one_chi_matches_partial_sums() {
        for d in [-1, -7, 2, 5, 13] {
            let k = QuadraticField::new(d).unwrap();
            let n = 2_000_000u64;
            // Summing by whole periods of |delta| keeps the tail small.
            let period = k.delta().unsigned_abs();
            let top = n - n % period;
            let partial: f64 = (1..=top).map(|m| k.chi(m) as f64 / m as f64).sum();
            let v = k.l_one_chi().unwrap();
            assert!((v - partial).abs() < 1e-4, "D = {d}: {v} vs {partial}");
        }
    }
}
