//! Arithmetic in `O_K/fO_K` and the groups built from it: the unit group,
//! `PreCl(O_f)`, `PrinCl(O_f)`, `ℓ(f)` and the multiplicative invariants
//! `ψ, L, L'`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::abelian::{quotient_structure, AbelianGroupStructure, QuotientInfo};
use crate::arith::{self, gcd, inv_mod, lcm, mul_mod};
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;

/// Largest modulus accepted by residue arithmetic.
pub const MODULUS_CAP: u64 = 1 << 31;

/// Default bound on `#(O_K/fO_K)^×` for explicit enumeration.
pub const UNIT_ENUMERATION_BOUND: u64 = 10_000_000;

/// `a + bω` modulo `fO_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueElement {
    pub a: u64,
    pub b: u64,
    pub f: u64,
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w (mod {})", self.a, self.b, self.f)
    }
}

impl ResidueElement {
    pub fn new(a: i128, b: i128, f: u64) -> Self {
        Self {
            a: arith::reduce_signed(a, f),
            b: arith::reduce_signed(b, f),
            f,
        }
    }

    pub fn one(f: u64) -> Self {
        Self::new(1, 0, f)
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }
}

/// `O_K/fO_K` for a fixed `K` and `f`.
#[derive(Debug, Clone, Copy)]
pub struct ResidueRing {
    f: u64,
    /// `ω² = tr·ω − nm`, both reduced mod `f`.
    tr: u64,
    nm: u64,
    tr_raw: i64,
    nm_raw: i64,
}

impl ResidueRing {
    pub fn new(k: &QuadraticField, f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if f > MODULUS_CAP {
            return Err(Error::ModulusTooLarge(f));
        }
        let (tr, nm) = k.omega_trace_norm();
        Ok(Self {
            f,
            tr: arith::reduce_signed(tr as i128, f),
            nm: arith::reduce_signed(nm as i128, f),
            tr_raw: tr,
            nm_raw: nm,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.f
    }

    pub fn element(&self, a: i128, b: i128) -> ResidueElement {
        ResidueElement::new(a, b, self.f)
    }

    pub fn from_big(&self, a: &BigInt, b: &BigInt) -> ResidueElement {
        let m = BigInt::from(self.f);
        let red = |x: &BigInt| ((x % &m + &m) % &m).to_u64().expect("reduced");
        ResidueElement {
            a: red(a),
            b: red(b),
            f: self.f,
        }
    }

    pub fn one(&self) -> ResidueElement {
        ResidueElement::one(self.f)
    }

    fn check(&self, x: &ResidueElement) -> Result<()> {
        if x.f != self.f {
            return Err(Error::ModulusMismatch(x.f, self.f));
        }
        Ok(())
    }

    /// Product on raw coefficients already reduced mod `f`.
    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64, c: u64, d: u64) -> (u64, u64) {
        let f = self.f as u128;
        let (a, b, c, d) = (a as u128, b as u128, c as u128, d as u128);
        let bd = b * d % f;
        let re = (a * c + (f - bd) * self.nm as u128) % f;
        let im = (a * d + b * c + bd * self.tr as u128) % f;
        (re as u64, im as u64)
    }

    pub fn mul(&self, x: &ResidueElement, y: &ResidueElement) -> Result<ResidueElement> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = self.mul_raw(x.a, x.b, y.a, y.b);
        Ok(ResidueElement { a, b, f: self.f })
    }

    pub fn pow(&self, x: &ResidueElement, mut e: u64) -> Result<ResidueElement> {
        self.check(x)?;
        let (mut ba, mut bb) = (x.a, x.b);
        let (mut ra, mut rb) = (1 % self.f, 0);
        while e > 0 {
            if e & 1 == 1 {
                (ra, rb) = self.mul_raw(ra, rb, ba, bb);
            }
            (ba, bb) = self.mul_raw(ba, bb, ba, bb);
            e >>= 1;
        }
        Ok(ResidueElement {
            a: ra,
            b: rb,
            f: self.f,
        })
    }

    /// Norm of the lift `a + bω` with `0 ≤ a, b < f`, reduced mod `f`.
    pub fn norm_mod(&self, x: &ResidueElement) -> u64 {
        let v = (x.a as i128).pow(2)
            + self.tr_raw as i128 * x.a as i128 * x.b as i128
            + self.nm_raw as i128 * (x.b as i128).pow(2);
        arith::reduce_signed(v, self.f)
    }

    pub fn is_unit(&self, x: &ResidueElement) -> bool {
        gcd(self.norm_mod(x), self.f) == 1
    }
}

pub fn residue_mul(
    k: &QuadraticField,
    x: &ResidueElement,
    y: &ResidueElement,
) -> Result<ResidueElement> {
    if x.f != y.f {
        return Err(Error::ModulusMismatch(x.f, y.f));
    }
    ResidueRing::new(k, x.f)?.mul(x, y)
}

pub fn residue_pow(k: &QuadraticField, x: &ResidueElement, e: u64) -> Result<ResidueElement> {
    ResidueRing::new(k, x.f)?.pow(x, e)
}

/// `#(O_K/fO_K)^× = φ(f)·ψ(f)`.
pub fn unit_group_order(k: &QuadraticField, f: u64) -> Result<u64> {
    let factors = arith::factor(f)?;
    Ok(arith::euler_phi(f)? * psi_from_factors(k, &factors)?)
}

/// Every unit of `O_K/fO_K`, in lexicographic order of `(a, b)`.
pub fn unit_group(k: &QuadraticField, f: u64) -> Result<Vec<ResidueElement>> {
    unit_group_with_bound(k, f, UNIT_ENUMERATION_BOUND)
}

pub fn unit_group_with_bound(
    k: &QuadraticField,
    f: u64,
    bound: u64,
) -> Result<Vec<ResidueElement>> {
    let ring = ResidueRing::new(k, f)?;
    let size = unit_group_order(k, f)?;
    if size > bound {
        return Err(Error::bound("unit group size", size, bound));
    }
    if f == 1 {
        return Ok(vec![ResidueElement { a: 0, b: 0, f: 1 }]);
    }
    let mut out = Vec::with_capacity(size as usize);
    for a in 0..f {
        for b in 0..f {
            let x = ResidueElement { a, b, f };
            if ring.is_unit(&x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// `ψ(f) = ∏ p^k (1 − χ(p)/p)`.
pub fn psi_from_factors(k: &QuadraticField, factors: &[(u64, u32)]) -> Result<u64> {
    let mut acc: u64 = 1;
    for &(p, e) in factors {
        acc = acc
            .checked_mul(psi_prime_power(k, p, e)?)
            .ok_or_else(|| Error::bound("psi", u64::MAX as u128 + 1, u64::MAX))?;
    }
    Ok(acc)
}

pub fn psi_prime_power(k: &QuadraticField, p: u64, e: u32) -> Result<u64> {
    let pk1 = p
        .checked_pow(e - 1)
        .ok_or_else(|| Error::bound("p^k", u64::MAX as u128 + 1, u64::MAX))?;
    let local = (p as i128 - k.chi(p) as i128) * pk1 as i128;
    u64::try_from(local).map_err(|_| Error::bound("psi", local as u128, u64::MAX))
}

pub fn psi(k: &QuadraticField, f: u64) -> Result<u64> {
    psi_from_factors(k, &arith::factor(f)?)
}

/// `PreCl(O_f) = (O_K/fO_K)^× / (Z/fZ)^×`, one canonical representative per class.
///
/// Locally at `p^k` a class is represented by `(a, 1)` when the `ω`-coefficient
/// is a unit mod `p`, and by `(1, b)` with `p | b` otherwise. The global
/// representative is the CRT combination of the local ones.
#[derive(Debug, Clone)]
pub struct PreClassGroup {
    ring: ResidueRing,
    /// `(p^k, CRT idempotent for p^k)`.
    locals: Vec<(u64, u64)>,
    elements: Vec<(u64, u64)>,
    index: HashMap<u64, u32>,
}

impl PreClassGroup {
    pub fn new(k: &QuadraticField, f: u64) -> Result<Self> {
        Self::with_bound(k, f, UNIT_ENUMERATION_BOUND)
    }

    pub fn with_bound(k: &QuadraticField, f: u64, bound: u64) -> Result<Self> {
        let factors = arith::factor(f)?;
        Self::from_factors(k, f, &factors, bound)
    }

    pub fn from_factors(
        k: &QuadraticField,
        f: u64,
        factors: &[(u64, u32)],
        bound: u64,
    ) -> Result<Self> {
        let ring = ResidueRing::new(k, f)?;
        let order = psi_from_factors(k, factors)?;
        if order > bound {
            return Err(Error::bound("PreCl order", order, bound));
        }
        let locals: Vec<(u64, u64)> = factors
            .iter()
            .map(|&(p, e)| {
                let q = p.pow(e);
                let co = f / q;
                let e_q = mul_mod(co, inv_mod(co % q, q).unwrap_or(0), f);
                (q, e_q)
            })
            .collect();
        let mut elements = vec![(0u64, 0u64); 1];
        elements[0] = (1 % f, 0);
        let mut first = true;
        for (&(p, _), &(q, e_q)) in factors.iter().zip(&locals) {
            let local_ring = ResidueRing::new(k, q)?;
            let mut reps = Vec::new();
            for a in 0..q {
                let x = ResidueElement { a, b: 1 % q, f: q };
                if gcd(local_ring.norm_mod(&x), p) == 1 {
                    reps.push((a, 1 % q));
                }
            }
            for b in (0..q).step_by(p as usize) {
                reps.push((1 % q, b));
            }
            let mut next = Vec::with_capacity(elements.len() * reps.len());
            for &(ga, gb) in &elements {
                for &(la, lb) in &reps {
                    // replace the p^k component of the running CRT combination
                    let (ba, bb) = if first { (0, 0) } else { (ga, gb) };
                    let a = (ba as u128 + mul_mod(la, e_q, f) as u128) % f as u128;
                    let b = (bb as u128 + mul_mod(lb, e_q, f) as u128) % f as u128;
                    next.push((a as u64, b as u64));
                }
            }
            elements = next;
            first = false;
        }
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (a * f + b, i as u32))
            .collect();
        debug_assert_eq!(elements.len() as u64, order);
        Ok(Self {
            ring,
            locals,
            elements,
            index,
        })
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> ResidueElement {
        let (a, b) = self.elements[i];
        ResidueElement {
            a,
            b,
            f: self.ring.f,
        }
    }

    /// Canonical representative of the class of a unit `(a, b)`.
    pub fn canonical(&self, a: u64, b: u64) -> (u64, u64) {
        let f = self.ring.f;
        if f == 1 {
            return (0, 0);
        }
        let mut s: u128 = 0;
        for &(q, e_q) in &self.locals {
            let (la, lb) = (a % q, b % q);
            let local = inv_mod(lb, q)
                .or_else(|| inv_mod(la, q))
                .expect("element is a unit");
            s += mul_mod(local, e_q, f) as u128;
        }
        let s = (s % f as u128) as u64;
        (mul_mod(a, s, f), mul_mod(b, s, f))
    }

    pub fn index_of(&self, x: &ResidueElement) -> Result<usize> {
        if x.f != self.ring.f {
            return Err(Error::ModulusMismatch(x.f, self.ring.f));
        }
        if !self.ring.is_unit(x) {
            return Err(Error::InvalidArgument(format!("{x} is not a unit")));
        }
        let (a, b) = self.canonical(x.a, x.b);
        Ok(self.index[&(a * self.ring.f + b)] as usize)
    }

    pub fn identity(&self) -> usize {
        let (a, b) = self.canonical(1 % self.ring.f, 0);
        self.index[&(a * self.ring.f + b)] as usize
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let (a, b) = self.elements[i];
        let (c, d) = self.elements[j];
        let (x, y) = self.ring.mul_raw(a, b, c, d);
        let (x, y) = self.canonical(x, y);
        self.index[&(x * self.ring.f + y)] as usize
    }

    /// Structure of `PreCl(O_f)/⟨gens⟩`.
    pub fn quotient(&self, gens: &[usize]) -> QuotientInfo {
        quotient_structure(self.len(), self.identity(), |i, j| self.mul(i, j), gens)
    }
}

/// Indices in `pre` of the images of generators of `O_K^×` that are not rational.
fn unit_generator_images(k: &QuadraticField, pre: &PreClassGroup) -> Result<Vec<usize>> {
    let ring = pre.ring();
    if k.is_real() {
        let eps = k.fundamental_unit()?;
        Ok(vec![pre.index_of(&ring.from_big(&eps.a, &eps.b))?])
    } else if k.torsion_count() > 2 {
        // ω is a primitive 4th (D = −1) or 6th (D = −3) root of unity
        Ok(vec![pre.index_of(&ring.element(0, 1))?])
    } else {
        Ok(Vec::new())
    }
}

pub fn preclass_structure(k: &QuadraticField, f: u64) -> Result<AbelianGroupStructure> {
    Ok(PreClassGroup::new(k, f)?.quotient(&[]).structure)
}

pub fn princlass_structure(k: &QuadraticField, f: u64) -> Result<AbelianGroupStructure> {
    Ok(princlass_info(k, f)?.structure)
}

/// `PrinCl(O_f)` with the order of the unit image.
pub fn princlass_info(k: &QuadraticField, f: u64) -> Result<QuotientInfo> {
    let pre = PreClassGroup::new(k, f)?;
    let gens = unit_generator_images(k, &pre)?;
    Ok(pre.quotient(&gens))
}

/// Brute-force `PreCl(O_f)` by partitioning the full unit group into cosets
/// of the rational units. Used as an oracle for [`PreClassGroup`].
pub fn preclass_structure_bruteforce(k: &QuadraticField, f: u64) -> Result<AbelianGroupStructure> {
    let ring = ResidueRing::new(k, f)?;
    let units = unit_group(k, f)?;
    let index: HashMap<ResidueElement, usize> =
        units.iter().enumerate().map(|(i, u)| (*u, i)).collect();
    let rational: Vec<usize> = (1..f.max(2))
        .filter(|&a| gcd(a, f) == 1 || f == 1)
        .map(|a| index[&ring.element(a as i128, 0)])
        .collect();
    let mul = |i: usize, j: usize| index[&ring.mul(&units[i], &units[j]).expect("same ring")];
    let identity = index[&ring.one()];
    Ok(quotient_structure(units.len(), identity, mul, &rational).structure)
}

fn require_real(k: &QuadraticField) -> Result<()> {
    if k.is_real() {
        Ok(())
    } else {
        Err(Error::ImaginaryField("ell"))
    }
}

/// Least `ℓ ≥ 1` with `ε^ℓ ∈ O_f`, found by repeated multiplication.
///
/// The search is capped at `L(f)` steps, which always suffices.
pub fn ell_iterative(k: &QuadraticField, f: u64) -> Result<u64> {
    require_real(k)?;
    let ring = ResidueRing::new(k, f)?;
    let cap = carmichael_l(k, f)?;
    let eps = k.fundamental_unit()?;
    let e = ring.from_big(&eps.a, &eps.b);
    let mut x = e;
    for step in 1..=cap {
        if x.is_rational() {
            return Ok(step);
        }
        x = ring.mul(&x, &e)?;
    }
    Err(Error::EllSearchExhausted(cap))
}

/// `ℓ(f)` as the order of `ε` in `PreCl(O_f)`, found by stripping prime
/// factors from the group exponent bound `L(f)`.
pub fn ell(k: &QuadraticField, f: u64) -> Result<u64> {
    require_real(k)?;
    let factors = arith::factor(f)?;
    ell_from_factors(k, f, &factors)
}

pub fn ell_from_factors(k: &QuadraticField, f: u64, factors: &[(u64, u32)]) -> Result<u64> {
    require_real(k)?;
    let ring = ResidueRing::new(k, f)?;
    let eps = k.fundamental_unit()?;
    let e = ring.from_big(&eps.a, &eps.b);
    let bound = l_from_factors(k, factors, false)?;
    order_in_preclass(&ring, &e, bound)
}

/// Least `m | bound` with `x^m` rational, assuming `x^bound` is rational.
pub fn order_in_preclass(ring: &ResidueRing, x: &ResidueElement, bound: u64) -> Result<u64> {
    let mut ord = bound;
    for (p, _) in arith::factor(bound)? {
        while ord.is_multiple_of(p) && ring.pow(x, ord / p)?.is_rational() {
            ord /= p;
        }
    }
    if !ring.pow(x, ord)?.is_rational() {
        return Err(Error::EllSearchExhausted(bound));
    }
    Ok(ord)
}

/// `ℓ(f) = lcm ℓ(p^k)` over `p^k ∥ f`.
pub fn ell_via_crt(k: &QuadraticField, f: u64) -> Result<u64> {
    require_real(k)?;
    arith::factor(f)?
        .iter()
        .try_fold(1, |acc, &(p, e)| Ok(lcm(acc, ell(k, p.pow(e))?)))
}

/// `L(f)`, or `L'(f)` when `only_large` restricts to `p > 3`.
pub fn l_from_factors(k: &QuadraticField, factors: &[(u64, u32)], only_large: bool) -> Result<u64> {
    factors
        .iter()
        .filter(|&&(p, _)| !only_large || p > 3)
        .try_fold(1, |acc, &(p, e)| Ok(lcm(acc, psi_prime_power(k, p, e)?)))
}

pub fn carmichael_l(k: &QuadraticField, f: u64) -> Result<u64> {
    l_from_factors(k, &arith::factor(f)?, false)
}

/// Order of the image of `O_K^×` in `PreCl(O_f)`.
pub fn unit_image_order(k: &QuadraticField, f: u64, factors: &[(u64, u32)]) -> Result<u64> {
    if k.is_real() {
        return ell_from_factors(k, f, factors);
    }
    let w = k.torsion_count() as u64;
    if w == 2 {
        return Ok(1);
    }
    let ring = ResidueRing::new(k, f)?;
    let omega = ring.element(0, 1);
    let mut x = omega;
    for m in 1..=w {
        if x.is_rational() {
            return Ok(m);
        }
        x = ring.mul(&x, &omega)?;
    }
    unreachable!("ω^w = 1 is rational")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderInvariants {
    pub f: u64,
    pub psi: u64,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "Lprime")]
    pub lprime: u64,
    pub ell: Option<u64>,
    pub unit_image_order: u64,
    pub omega_big: u32,
}

pub fn order_invariants(k: &QuadraticField, f: u64) -> Result<OrderInvariants> {
    let factors = arith::factor(f)?;
    order_invariants_from_factors(k, f, &factors)
}

pub fn order_invariants_from_factors(
    k: &QuadraticField,
    f: u64,
    factors: &[(u64, u32)],
) -> Result<OrderInvariants> {
    let ell = if k.is_real() {
        Some(ell_from_factors(k, f, factors)?)
    } else {
        None
    };
    Ok(OrderInvariants {
        f,
        psi: psi_from_factors(k, factors)?,
        l: l_from_factors(k, factors, false)?,
        lprime: l_from_factors(k, factors, true)?,
        unit_image_order: match ell {
            Some(l) => l,
            None => unit_image_order(k, f, factors)?,
        },
        ell,
        omega_big: factors.iter().map(|&(_, e)| e).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(d: i64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn residue_mul_examples() {
        let r2 = field(2);
        let x = ResidueElement::new(1, 1, 5);
        assert_eq!(
            residue_mul(&r2, &x, &x).unwrap(),
            ResidueElement::new(3, 2, 5)
        );
        assert_eq!(residue_mul(&r2, &x, &ResidueElement::one(5)).unwrap(), x);
        let gi = field(-1);
        let w = ResidueElement::new(0, 1, 3);
        assert_eq!(
            residue_mul(&gi, &w, &w).unwrap(),
            ResidueElement::new(2, 0, 3)
        );
        assert_eq!(
            residue_mul(&gi, &w, &ResidueElement::one(5)),
            Err(Error::ModulusMismatch(3, 5))
        );
        let big = ResidueElement::new(1, 1, (1 << 31) + 1);
        assert_eq!(
            residue_mul(&gi, &big, &big),
            Err(Error::ModulusTooLarge((1 << 31) + 1))
        );
    }

    #[test]
    fn residue_pow_examples() {
        let r2 = field(2);
        let x = ResidueElement::new(1, 1, 5);
        assert_eq!(residue_pow(&r2, &x, 0).unwrap(), ResidueElement::one(5));
        assert_eq!(
            residue_pow(&r2, &x, 3).unwrap(),
            ResidueElement::new(2, 0, 5)
        );
        let gi = field(-1);
        assert_eq!(
            residue_pow(&gi, &ResidueElement::new(0, 1, 3), 4).unwrap(),
            ResidueElement::one(3)
        );
    }

    #[test]
    fn half_integral_multiplication() {
        // ω = (1+√5)/2 satisfies ω² = ω + 1
        let k = field(5);
        let w = ResidueElement::new(0, 1, 11);
        assert_eq!(
            residue_mul(&k, &w, &w).unwrap(),
            ResidueElement::new(1, 1, 11)
        );
    }

    #[test]
    fn unit_group_examples() {
        let gi = field(-1);
        let u = unit_group(&gi, 2).unwrap();
        assert_eq!(
            u,
            vec![ResidueElement::new(0, 1, 2), ResidueElement::new(1, 0, 2)]
        );
        assert_eq!(unit_group(&gi, 3).unwrap().len(), 8);
        assert_eq!(
            unit_group(&gi, 1).unwrap(),
            vec![ResidueElement { a: 0, b: 0, f: 1 }]
        );
        assert!(matches!(
            unit_group_with_bound(&gi, 1000, 1000),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn lagrange_on_units() {
        for d in [-1, -3, 2, 5] {
            let k = field(d);
            for f in 1..=30 {
                let units = unit_group(&k, f).unwrap();
                let n = units.len() as u64;
                assert_eq!(n, unit_group_order(&k, f).unwrap());
                for x in &units {
                    assert_eq!(residue_pow(&k, x, n).unwrap(), ResidueElement::one(f));
                }
            }
        }
    }

    #[test]
    fn preclass_examples() {
        assert_eq!(
            preclass_structure(&field(-1), 3).unwrap(),
            AbelianGroupStructure::cyclic(4)
        );
        assert_eq!(
            preclass_structure(&field(2), 5).unwrap(),
            AbelianGroupStructure::cyclic(6)
        );
        assert_eq!(
            preclass_structure(&field(2), 1).unwrap(),
            AbelianGroupStructure::trivial()
        );
    }

    #[test]
    fn princlass_examples() {
        assert_eq!(
            princlass_structure(&field(2), 5).unwrap(),
            AbelianGroupStructure::cyclic(2)
        );
        assert_eq!(
            princlass_structure(&field(-1), 2).unwrap(),
            AbelianGroupStructure::trivial()
        );
        assert_eq!(
            princlass_structure(&field(-1), 1).unwrap(),
            AbelianGroupStructure::trivial()
        );
    }

    #[test]
    fn canonical_group_matches_bruteforce() {
        for d in [-1, -2, -3, -5, -7, 2, 3, 5, 13] {
            let k = field(d);
            for f in 1..=40 {
                let fast = preclass_structure(&k, f).unwrap();
                let slow = preclass_structure_bruteforce(&k, f).unwrap();
                assert_eq!(fast, slow, "D = {d}, f = {f}");
                assert_eq!(fast.order(), psi(&k, f).unwrap());
            }
        }
    }

    #[test]
    fn ell_examples() {
        let r2 = field(2);
        assert_eq!(ell(&r2, 1).unwrap(), 1);
        assert_eq!(ell(&r2, 3).unwrap(), 4);
        assert_eq!(ell(&r2, 5).unwrap(), 3);
        assert_eq!(ell(&field(-1), 3), Err(Error::ImaginaryField("ell")));
    }

    #[test]
    fn ell_methods_agree() {
        for d in [2, 3, 5, 6, 7, 13, 61] {
            let k = field(d);
            for f in 1..=300 {
                let fast = ell(&k, f).unwrap();
                assert_eq!(fast, ell_iterative(&k, f).unwrap(), "D = {d}, f = {f}");
                assert_eq!(fast, ell_via_crt(&k, f).unwrap(), "D = {d}, f = {f}");
            }
        }
    }

    #[test]
    fn ell_is_index_of_princlass() {
        for d in [2, 3, 5, 7] {
            let k = field(d);
            for f in 1..=150 {
                if !k.is_split_free(f).unwrap() {
                    continue;
                }
                let pre = preclass_structure(&k, f).unwrap();
                let prin = princlass_info(&k, f).unwrap();
                let l = ell(&k, f).unwrap();
                assert_eq!(l, prin.subgroup_order);
                assert_eq!(psi(&k, f).unwrap() / prin.structure.order(), l);
                assert_eq!(pre.exponent() % l, 0);
            }
        }
    }

    #[test]
    fn order_invariant_examples() {
        let gi = field(-1);
        let inv = order_invariants(&gi, 6).unwrap();
        assert_eq!(
            (inv.psi, inv.l, inv.lprime, inv.omega_big, inv.ell),
            (8, 4, 1, 2, None)
        );
        let inv = order_invariants(&gi, 1).unwrap();
        assert_eq!((inv.psi, inv.l, inv.lprime, inv.omega_big), (1, 1, 1, 0));
        let inv = order_invariants(&field(2), 9).unwrap();
        assert_eq!((inv.psi, inv.l, inv.lprime), (12, 12, 1));
        assert_eq!(order_invariants(&gi, 2).unwrap().unit_image_order, 2);
        assert_eq!(order_invariants(&field(-3), 2).unwrap().unit_image_order, 3);
    }

    #[test]
    fn psi_is_preclass_order_for_all_f() {
        for d in [-1, 2, 5] {
            let k = field(d);
            for f in 1..=60 {
                assert_eq!(
                    PreClassGroup::new(&k, f).unwrap().len() as u64,
                    psi(&k, f).unwrap()
                );
            }
        }
    }

    proptest! {
        #[test]
        fn psi_is_multiplicative(d in prop::sample::select(vec![-1i64, -2, -3, -5, 2, 3, 5, 7]), m in 1u64..300, n in 1u64..300) {
            prop_assume!(crate::arith::gcd(m, n) == 1);
            let k = QuadraticField::new(d).unwrap();
            prop_assert_eq!(psi(&k, m * n).unwrap(), psi(&k, m).unwrap() * psi(&k, n).unwrap());
        }

        #[test]
        fn exponent_chain(d in prop::sample::select(vec![-1i64, -3, -7, 2, 3, 5, 13]), f in 1u64..400) {
            let k = QuadraticField::new(d).unwrap();
            let inv = order_invariants(&k, f).unwrap();
            let pre = preclass_structure(&k, f).unwrap();
            prop_assert_eq!(pre.order(), inv.psi);
            prop_assert_eq!(inv.l % pre.exponent(), 0);
            prop_assert_eq!(pre.exponent() % inv.lprime, 0);
            if let Some(ell) = inv.ell {
                prop_assert_eq!(pre.exponent() % ell, 0);
            }
        }
    }
}
