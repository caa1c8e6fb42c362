//! Positive definite binary quadratic forms: reduction, composition and the
//! form class group of discriminant `f²Δ` for imaginary `K`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::abelian::{quotient_structure, AbelianGroupStructure};
use crate::arith::{gcd, isqrt};
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::ringarith;

/// Largest `|disc|` accepted by [`reduced_forms`].
pub const DISC_BOUND: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The principal form `(1, b, (b² − disc)/4)` with `b ∈ {0, 1}`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self::new(1, b, (b * b - disc) / 4)
    }

    pub fn inverse(&self) -> Self {
        reduce(self.a as i128, -self.b as i128, self.c as i128)
    }

    pub fn reduce(&self) -> Self {
        reduce(self.a as i128, self.b as i128, self.c as i128)
    }
}

fn reduce(mut a: i128, mut b: i128, mut c: i128) -> QuadForm {
    let disc = b * b - 4 * a * c;
    loop {
        // b into (−a, a]
        let two_a = 2 * a;
        let mut nb = b.rem_euclid(two_a);
        if nb > a {
            nb -= two_a;
        }
        if nb != b {
            b = nb;
            c = (b * b - disc) / (4 * a);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if (a == c || b == -a) && b < 0 {
            b = -b;
        }
        break;
    }
    QuadForm::new(a as i64, b as i64, c as i64)
}

fn check_disc(disc: i64) -> Result<()> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(disc));
    }
    let abs = disc.unsigned_abs();
    if abs > DISC_BOUND {
        return Err(Error::bound("|disc|", abs, DISC_BOUND));
    }
    Ok(())
}

/// One reduced primitive form per class, sorted lexicographically.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadForm>> {
    check_disc(disc)?;
    let bmax = isqrt(disc.unsigned_abs() / 3) as i64;
    let mut forms = Vec::new();
    let mut b = disc.rem_euclid(2);
    while b <= bmax {
        let n = (b * b - disc) / 4;
        let mut a = b.max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                let f = QuadForm::new(a, b, c);
                if f.is_primitive() {
                    forms.push(f);
                    if b > 0 && b < a && a < c {
                        forms.push(QuadForm::new(a, -b, c));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    forms.sort_unstable();
    Ok(forms)
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Dirichlet composition followed by reduction.
pub fn compose(x: &QuadForm, y: &QuadForm) -> Result<QuadForm> {
    if x.disc() != y.disc() {
        return Err(Error::DiscMismatch(x.disc(), y.disc()));
    }
    let disc = x.disc() as i128;
    let (f1, f2) = if x.a > y.a { (y, x) } else { (x, y) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    // u·a2 + v·a1 = d
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, x2, y2) = xgcd(s, d);
        (d1, x2, -y2)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    Ok(reduce(a3, b3, c3))
}

/// The class group of discriminant `disc` as an indexed set with its law.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    pub disc: i64,
    pub forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
}

impl FormClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        let forms = reduced_forms(disc)?;
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        Ok(Self { disc, forms, index })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.index[&QuadForm::principal(self.disc)]
    }

    pub fn index_of(&self, f: &QuadForm) -> usize {
        self.index[&f.reduce()]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let c = compose(&self.forms[i], &self.forms[j]).expect("same discriminant");
        self.index[&c]
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        quotient_structure(self.len(), self.identity(), |i, j| self.mul(i, j), &[]).structure
    }
}

/// `Cl(O_f)` for imaginary `K`, as forms of discriminant `f²Δ`.
pub fn form_class_group(k: &QuadraticField, f: u64) -> Result<AbelianGroupStructure> {
    Ok(FormClassGroup::new(order_disc(k, f)?)?.structure())
}

fn order_disc(k: &QuadraticField, f: u64) -> Result<i64> {
    if k.is_real() {
        return Err(Error::RealField);
    }
    let disc = (f as i128) * (f as i128) * k.delta() as i128;
    if disc.unsigned_abs() > DISC_BOUND as u128 {
        return Err(Error::bound("|f^2 delta|", disc.unsigned_abs(), DISC_BOUND));
    }
    Ok(disc as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassNumberCheck {
    pub form_count: u64,
    pub formula_value: u64,
    pub matches: bool,
}

/// Compares `#Cl(O_f)` with `h_K · ψ(f) / #(image of O_K^× in PreCl(O_f))`.
pub fn class_number_formula_check(k: &QuadraticField, f: u64) -> Result<ClassNumberCheck> {
    let form_count = reduced_forms(order_disc(k, f)?)?.len() as u64;
    let inv = ringarith::order_invariants(k, f)?;
    let h = k.class_number()?;
    let formula_value = h * inv.psi / inv.unit_image_order;
    Ok(ClassNumberCheck {
        form_count,
        formula_value,
        matches: form_count == formula_value && (h * inv.psi) % inv.unit_image_order == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_examples() {
        assert_eq!(reduced_forms(-4).unwrap(), vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(reduced_forms(-12).unwrap(), vec![QuadForm::new(1, 0, 3)]);
        assert_eq!(
            reduced_forms(-20).unwrap(),
            vec![QuadForm::new(1, 0, 5), QuadForm::new(2, 2, 3)]
        );
        assert_eq!(reduced_forms(-23).unwrap().len(), 3);
        assert_eq!(reduced_forms(8), Err(Error::BadDiscriminant(8)));
        assert_eq!(reduced_forms(-6), Err(Error::BadDiscriminant(-6)));
    }

    /// Oracle: count reduced primitive forms by scanning all small (a, b, c).
    fn brute_count(disc: i64) -> usize {
        let mut n = 0;
        for a in 1..=disc.abs() {
            for b in -a..=a {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = QuadForm::new(a, b, num / (4 * a));
                if f.is_reduced() && f.is_primitive() {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn reduced_forms_match_brute_force() {
        for d in (3..400)
            .map(|d: i64| -d)
            .filter(|d| matches!(d.rem_euclid(4), 0 | 1))
        {
            let forms = reduced_forms(d).unwrap();
            assert_eq!(forms.len(), brute_count(d), "disc {d}");
            assert!(forms.iter().all(|f| f.is_reduced() && f.disc() == d));
        }
    }

    #[test]
    fn compose_examples() {
        let g = QuadForm::new(2, 2, 3);
        assert_eq!(compose(&g, &g).unwrap(), QuadForm::new(1, 0, 5));
        let e = QuadForm::principal(-4);
        assert_eq!(compose(&e, &e).unwrap(), e);
        for f in reduced_forms(-20).unwrap() {
            assert_eq!(compose(&QuadForm::principal(-20), &f).unwrap(), f);
        }
        assert!(matches!(
            compose(&g, &QuadForm::principal(-4)),
            Err(Error::DiscMismatch(-20, -4))
        ));
    }

    #[test]
    fn group_laws_exhaustive() {
        for d in (3..=2000i64)
            .map(|d| -d)
            .filter(|d| matches!(d.rem_euclid(4), 0 | 1))
        {
            let g = FormClassGroup::new(d).unwrap();
            if g.len() > 12 {
                continue;
            }
            let e = g.identity();
            for i in 0..g.len() {
                assert_eq!(g.mul(i, e), i);
                assert_eq!(
                    g.index_of(&compose(&g.forms[i], &g.forms[i].inverse()).unwrap()),
                    e
                );
                for j in 0..g.len() {
                    assert_eq!(g.mul(i, j), g.mul(j, i), "disc {d}");
                    for l in 0..g.len() {
                        assert_eq!(g.mul(g.mul(i, j), l), g.mul(i, g.mul(j, l)), "disc {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn known_class_groups() {
        // disc −56: Z/4; disc −84: Z/2 ⊕ Z/2; disc −3299: Z/3 ⊕ Z/9
        assert_eq!(
            FormClassGroup::new(-56).unwrap().structure(),
            AbelianGroupStructure::cyclic(4)
        );
        assert_eq!(
            FormClassGroup::new(-84).unwrap().structure(),
            AbelianGroupStructure::new(vec![2, 2]).unwrap()
        );
        assert_eq!(
            FormClassGroup::new(-3299).unwrap().structure(),
            AbelianGroupStructure::new(vec![3, 9]).unwrap()
        );
    }

    #[test]
    fn form_class_group_examples() {
        let e = QuadraticField::new(-3).unwrap();
        assert_eq!(
            form_class_group(&e, 2).unwrap(),
            AbelianGroupStructure::trivial()
        );
        let gi = QuadraticField::new(-1).unwrap();
        assert_eq!(
            form_class_group(&gi, 2).unwrap(),
            AbelianGroupStructure::trivial()
        );
        let k = QuadraticField::new(-5).unwrap();
        assert_eq!(
            form_class_group(&k, 1).unwrap(),
            AbelianGroupStructure::cyclic(2)
        );
        let r = QuadraticField::new(2).unwrap();
        assert_eq!(form_class_group(&r, 1), Err(Error::RealField));
    }

    #[test]
    fn formula_check_examples() {
        let e = QuadraticField::new(-3).unwrap();
        let c = class_number_formula_check(&e, 2).unwrap();
        assert_eq!((c.form_count, c.formula_value, c.matches), (1, 1, true));
        let gi = QuadraticField::new(-1).unwrap();
        let c = class_number_formula_check(&gi, 2).unwrap();
        assert_eq!((c.form_count, c.formula_value, c.matches), (1, 1, true));
        let k = QuadraticField::new(-5).unwrap();
        let c = class_number_formula_check(&k, 1).unwrap();
        assert_eq!((c.form_count, c.formula_value, c.matches), (2, 2, true));
    }
}
