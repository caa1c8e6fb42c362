//! Constants attached to `K`: the split-free density `c_α`, `C_K`, `c₂`,
//! and the logarithmic integral.

use std::f64::consts::PI;

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::{is_prime_discriminant, QuadraticField};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A truncated sum or product with a rigorous bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
    pub cutoff: u64,
}

fn check_cutoff(cutoff: u64) -> Result<()> {
    if cutoff < 1000 {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} < 1000")));
    }
    Ok(())
}

/// `c_α = √(|Δ| / (π L(1,χ) φ(|Δ|))) · ∏_{χ(p) = −1} (1 − p⁻²)^{−1/2}`.
///
/// The product runs over inert `p ≤ tail_cutoff`. The omitted factor lies in
/// `[1, (1 − 1/P)^{−1/2}]` because `Σ_{p>P} p⁻² < 1/P`.
pub fn c_alpha(k: &QuadraticField, tail_cutoff: u64) -> Result<Estimate> {
    check_cutoff(tail_cutoff)?;
    let abs = k.delta().unsigned_abs();
    let lead = (abs as f64 / (PI * k.l_one_chi()? * arith::euler_phi(abs)? as f64)).sqrt();
    let log_prod: f64 = arith::primes_up_to(tail_cutoff)
        .into_iter()
        .filter(|&p| k.chi(p) == -1)
        .map(|p| -0.5 * (-1.0 / (p as f64 * p as f64)).ln_1p())
        .sum();
    let value = lead * log_prod.exp();
    let tail = (1.0 - 1.0 / tail_cutoff as f64).powf(-0.5) - 1.0;
    Ok(Estimate {
        value,
        error_bound: value * tail,
        cutoff: tail_cutoff,
    })
}

/// `sgn(Δ) · 1_𝒟(Δ) · |Δ| log Rad|Δ| / φ(|Δ|)²`.
pub fn discriminant_correction(k: &QuadraticField) -> Result<f64> {
    let delta = k.delta();
    if !is_prime_discriminant(delta) {
        return Ok(0.0);
    }
    let abs = delta.unsigned_abs();
    let phi = arith::euler_phi(abs)? as f64;
    let value = abs as f64 * (arith::rad(abs)? as f64).ln() / (phi * phi);
    Ok(delta.signum() as f64 * value)
}

/// `Σ_{p ≤ P, p > skip} log p / (p−1)²` with tail bound `2 log P / P`.
fn prime_log_sum(cutoff: u64, skip_two: bool) -> (f64, f64) {
    let sum = arith::primes_up_to(cutoff)
        .into_iter()
        .filter(|&p| !(skip_two && p == 2))
        .map(|p| (p as f64).ln() / ((p - 1) as f64).powi(2))
        .sum();
    let c = cutoff as f64;
    (sum, 2.0 * c.ln() / c)
}

/// `C_K = Σ_{p>2} log p/(p−1)² − 1 − sgn(Δ)·1_𝒟(Δ)·|Δ| log Rad|Δ| / φ(|Δ|)²`.
pub fn constant_ck(k: &QuadraticField, cutoff: u64) -> Result<Estimate> {
    check_cutoff(cutoff)?;
    let (sum, tail) = prime_log_sum(cutoff, true);
    Ok(Estimate {
        value: sum - 1.0 - discriminant_correction(k)?,
        error_bound: tail,
        cutoff,
    })
}

/// `c₂ = Σ_p log p/(p−1)² − sgn(Δ)·1_𝒟(Δ)·|Δ| log Rad|Δ| / φ(|Δ|)² − γ`.
pub fn constant_c2(k: &QuadraticField, cutoff: u64) -> Result<Estimate> {
    check_cutoff(cutoff)?;
    let (sum, tail) = prime_log_sum(cutoff, false);
    Ok(Estimate {
        value: sum - discriminant_correction(k)? - EULER_GAMMA,
        error_bound: tail,
        cutoff,
    })
}

/// `Li(y) = ∫₂^y dt / log t`, by adaptive Simpson in `u = log t`.
pub fn li(y: f64) -> f64 {
    if y <= 2.0 {
        return 0.0;
    }
    let g = |u: f64| u.exp() / u;
    let (a, b) = (2f64.ln(), y.ln());
    let (fa, fb, fm) = (g(a), g(b), g((a + b) / 2.0));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(
        &g,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        1e-10 * whole.abs().max(1.0),
        50,
    )
}

#[allow(clippy::too_many_arguments)]
fn simpson<G: Fn(f64) -> f64>(
    g: &G,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (g(lm), g(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ramanujan's series for `li(x)`, an independent oracle for [`li`].
    fn li_ramanujan(x: f64) -> f64 {
        let l = x.ln();
        let mut sum = 0.0;
        let mut inner = 0.0;
        let mut term = 1.0;
        for n in 1..200 {
            term *= l / n as f64;
            if (n - 1) % 2 == 0 {
                inner += 1.0 / n as f64;
            }
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * term / 2f64.powi(n - 1) * inner;
        }
        EULER_GAMMA + l.ln() + x.sqrt() * sum
    }

    const LI_2: f64 = 1.045_163_780_117_493;

    #[test]
    fn li_matches_series() {
        for y in [3.0, 10.0, 100.0, 1e4, 1e5, 1e6, 1e7] {
            let got = li(y);
            let want = li_ramanujan(y) - LI_2;
            assert!(((got - want) / want).abs() < 1e-8, "y={y}: {got} vs {want}");
        }
        assert_eq!(li(2.0), 0.0);
    }

    #[test]
    fn c_alpha_gaussian_matches_landau_ramanujan() {
        // for Q(i), c_α = 4K/π with K the Landau–Ramanujan constant
        let k = QuadraticField::new(-1).unwrap();
        let e = c_alpha(&k, 1_000_000).unwrap();
        let want = 4.0 * 0.764_223_653_589_220_7 / PI;
        assert!(
            (e.value - want).abs() <= e.error_bound + 1e-9,
            "{e:?} vs {want}"
        );
        assert!(e.error_bound < 1e-6);
    }

    #[test]
    fn c_alpha_real_is_positive_and_stable() {
        let k = QuadraticField::new(2).unwrap();
        let a = c_alpha(&k, 10_000).unwrap();
        let b = c_alpha(&k, 1_000_000).unwrap();
        assert!(a.value > 0.0);
        assert!(b.value >= a.value && b.value <= a.value + a.error_bound);
    }

    #[test]
    fn corrections() {
        let gi = QuadraticField::new(-1).unwrap();
        assert!((discriminant_correction(&gi).unwrap() + 2f64.ln()).abs() < 1e-15);
        let r2 = QuadraticField::new(2).unwrap();
        assert!((discriminant_correction(&r2).unwrap() - 2f64.ln() / 2.0).abs() < 1e-15);
        let k = QuadraticField::new(-5).unwrap();
        assert_eq!(discriminant_correction(&k).unwrap(), 0.0);
    }

    #[test]
    fn ck_and_c2_relation() {
        for d in [-1, -5, 2, 5, 13] {
            let k = QuadraticField::new(d).unwrap();
            let ck = constant_ck(&k, 100_000).unwrap();
            let c2 = constant_c2(&k, 100_000).unwrap();
            let diff = c2.value - ck.value;
            assert!((diff - (2f64.ln() + 1.0 - EULER_GAMMA)).abs() < 1e-12);
        }
        let gi = QuadraticField::new(-1).unwrap();
        let a = constant_ck(&gi, 10_000).unwrap();
        let b = constant_ck(&gi, 1_000_000).unwrap();
        assert!((a.value - b.value).abs() <= a.error_bound);
        assert!(constant_ck(&gi, 10).is_err());
    }
}
