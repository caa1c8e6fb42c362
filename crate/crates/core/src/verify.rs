//! Acceptance checks, shared by the test suite and `quadorder verify`.
//!
//! Each criterion returns a [`CriterionResult`] with a one-line summary; the
//! thresholds are the constants below.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::abelian::{davenport_bounds, davenport_exact, AbelianGroupStructure};
use crate::arith;
use crate::classgroups::{self, class_number_formula_check};
use crate::elasticity::{elasticity_bounds, irreducible_search};
use crate::error::Result;
use crate::quadfield::QuadraticField;
use crate::ringarith::{self, PreClassGroup, UNIT_ENUMERATION_BOUND};
use crate::stats::{self, ScanCaps, TkFunction};

pub const EXPONENT_FIELDS: [i64; 5] = [-1, -3, -5, 2, 5];
pub const EXPONENT_F_MAX: u64 = 2000;
pub const EXPONENT_TIME_LIMIT: Duration = Duration::from_secs(300);
pub const IMAGINARY_FIELDS: [i64; 5] = [-1, -2, -3, -5, -7];
pub const CLASS_NUMBER_F_MAX: u64 = 200;
pub const DAVENPORT_MAX_ORDER: u64 = 32;
pub const DAVENPORT_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const ELASTICITY_NORM_BOUND: u64 = 10_000;
/// Imaginary fields with `h_K ≤ 2` used for the `f = 1` search.
pub const HALF_FACTORIAL_FIELDS: [i64; 8] = [-1, -2, -3, -7, -5, -6, -10, -15];
pub const HOOLEY_QS: [u64; 2] = [3, 5];
pub const HOOLEY_YS: [u64; 2] = [100_000, 1_000_000];
pub const HOOLEY_RATIO_RANGE: (f64, f64) = (0.7, 1.3);
pub const HOOLEY_TIME_LIMIT: Duration = Duration::from_secs(120);
pub const SMALL_ORDER_T: u64 = 1_000_000;
pub const SMALL_ORDER_YS: [u64; 3] = [10, 30, 100];
pub const SMALL_ORDER_CONSTANT: f64 = 10.0;
pub const DENSITY_X: [u64; 2] = [10_000, 1_000_000];
pub const DENSITY_TOLERANCE: f64 = 0.10;
pub const DENSITY_CUTOFF: u64 = 1_000_000;
pub const TK_XS: [u64; 3] = [10_000, 100_000, 1_000_000];
pub const TK_RATIO_LIMIT: f64 = 100.0;
pub const TK_GROWTH_LIMIT: f64 = 2.0;
pub const DETERMINISM_X: u64 = 100_000;
pub const DETERMINISM_THREADS: [usize; 3] = [1, 4, 8];
pub const DETERMINISM_FIELD: i64 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

fn timed(
    id: u8,
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn field(d: i64) -> QuadraticField {
    QuadraticField::new(d).expect("fixture fields are valid")
}

/// Per-conductor data for criteria 1 and 2.
#[derive(Debug, Clone)]
pub struct PreClassRow {
    pub d: i64,
    pub f: u64,
    pub psi: u64,
    pub order: u64,
    pub exponent: u64,
    pub l: u64,
    pub lprime: u64,
}

/// Every split-free `f ≤ f_max` for each field, computed sequentially.
pub fn preclass_sweep(fields: &[i64], f_max: u64) -> Result<Vec<PreClassRow>> {
    let mut rows = Vec::new();
    for &d in fields {
        let k = field(d);
        for f in 1..=f_max {
            let factors = arith::factor(f)?;
            if factors.iter().any(|&(p, _)| k.chi(p) == 1) {
                continue;
            }
            let psi = ringarith::psi_from_factors(&k, &factors)?;
            if psi > UNIT_ENUMERATION_BOUND {
                continue;
            }
            let structure = PreClassGroup::from_factors(&k, f, &factors, UNIT_ENUMERATION_BOUND)?
                .quotient(&[])
                .structure;
            rows.push(PreClassRow {
                d,
                f,
                psi,
                order: structure.order(),
                exponent: structure.exponent(),
                l: ringarith::l_from_factors(&k, &factors, false)?,
                lprime: ringarith::l_from_factors(&k, &factors, true)?,
            });
        }
    }
    Ok(rows)
}

/// Criterion 1: `L'(f) | Exp PreCl(O_f) | L(f)`.
pub fn criterion_exponent_chain(rows: &[PreClassRow], sweep_time: Duration) -> CriterionResult {
    timed(1, "exponent chain L' | Exp PreCl | L", || {
        let bad: Vec<_> = rows
            .iter()
            .filter(|r| r.exponent % r.lprime != 0 || r.l % r.exponent != 0)
            .map(|r| (r.d, r.f))
            .collect();
        let fast = sweep_time <= EXPONENT_TIME_LIMIT;
        Ok((
            bad.is_empty() && fast,
            format!(
                "{} (field, f) pairs, {} violations {:?}, sweep {:.1}s (limit {}s)",
                rows.len(),
                bad.len(),
                &bad[..bad.len().min(5)],
                sweep_time.as_secs_f64(),
                EXPONENT_TIME_LIMIT.as_secs()
            ),
        ))
    })
}

/// Criterion 2: `#PreCl(O_f) = ψ(f)`.
pub fn criterion_preclass_order(rows: &[PreClassRow]) -> CriterionResult {
    timed(2, "pre-class order equals psi", || {
        let bad: Vec<_> = rows
            .iter()
            .filter(|r| r.order != r.psi)
            .map(|r| (r.d, r.f))
            .collect();
        Ok((
            bad.is_empty(),
            format!(
                "{} pairs, {} mismatches {:?}",
                rows.len(),
                bad.len(),
                &bad[..bad.len().min(5)]
            ),
        ))
    })
}

/// Criterion 3: `PreCl(O_{p^k})` is cyclic for non-split `p > 3`, `p^k ≤ 2000`.
pub fn criterion_cyclicity() -> CriterionResult {
    timed(3, "pre-class cyclicity at p^k, p > 3", || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for &d in &EXPONENT_FIELDS {
            let k = field(d);
            for p in arith::primes_up_to(EXPONENT_F_MAX)
                .into_iter()
                .filter(|&p| p > 3)
            {
                if k.chi(p) == 1 {
                    continue;
                }
                let mut q = p;
                while q <= EXPONENT_F_MAX {
                    checked += 1;
                    if !ringarith::preclass_structure(&k, q)?.is_cyclic() {
                        bad.push((d, q));
                    }
                    q *= p;
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{checked} prime powers, {} non-cyclic {:?}", bad.len(), bad),
        ))
    })
}

/// Criterion 4: `#Cl(O_f) = h_K ψ(f) / #(unit image)` for imaginary fields.
pub fn criterion_class_number_identity() -> CriterionResult {
    timed(4, "imaginary class number identity", || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for &d in &IMAGINARY_FIELDS {
            let k = field(d);
            let h = k.class_number()?;
            for f in 1..=CLASS_NUMBER_F_MAX {
                if !k.is_split_free(f)? {
                    continue;
                }
                checked += 1;
                let c = class_number_formula_check(&k, f)?;
                let prin = ringarith::princlass_structure(&k, f)?.order();
                if !c.matches || c.form_count != h * prin {
                    bad.push((d, f));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{checked} pairs, {} mismatches {:?}", bad.len(), bad),
        ))
    })
}

/// Criterion 5: Davenport bounds and exact values for `#G ≤ 32`.
pub fn criterion_davenport() -> CriterionResult {
    timed(5, "Davenport bounds and exact values", || {
        let start = Instant::now();
        let mut groups = 0;
        let mut bad = Vec::new();
        for n in 1..=DAVENPORT_MAX_ORDER {
            for g in AbelianGroupStructure::all_of_order(n) {
                groups += 1;
                let exact = davenport_exact(&g, 64)?;
                let (lo, hi) = davenport_bounds(&g);
                let cyclic_ok = !g.is_cyclic() || exact == n;
                if !(lo <= exact && exact <= hi) || !cyclic_ok {
                    bad.push(g.to_string());
                }
            }
        }
        let v22 = davenport_exact(&AbelianGroupStructure::new(vec![2, 2])?, 64)?;
        let v33 = davenport_exact(&AbelianGroupStructure::new(vec![3, 3])?, 64)?;
        let elapsed = start.elapsed();
        let ok = bad.is_empty() && v22 == 3 && v33 == 5 && elapsed <= DAVENPORT_TIME_LIMIT;
        Ok((
            ok,
            format!(
                "{groups} groups, {} failures {:?}, D((Z/2)^2)={v22}, D((Z/3)^2)={v33}, limit {}s",
                bad.len(),
                bad,
                DAVENPORT_TIME_LIMIT.as_secs()
            ),
        ))
    })
}

/// Criterion 6: elasticity fixtures for half-factorial orders.
pub fn criterion_elasticity() -> CriterionResult {
    timed(6, "elasticity fixtures", || {
        let k = field(-3);
        let r = elasticity_bounds(&k, 2, false)?;
        let one = num_rational::Ratio::from_integer(1);
        let contains_one = r.lower <= one && r.upper.is_some_and(|u| one <= u);
        let search = irreducible_search(&k, 2, ELASTICITY_NORM_BOUND)?.max_omega;
        let mut detail = format!(
            "Q(sqrt(-3)) f=2: [{}, {}] max_omega={search}",
            r.lower,
            r.upper.map_or("inf".into(), |u| u.to_string())
        );
        let mut ok = contains_one && search == 2;
        for d in HALF_FACTORIAL_FIELDS {
            let k = field(d);
            if k.class_number()? > 2 {
                continue;
            }
            let m = irreducible_search(&k, 1, ELASTICITY_NORM_BOUND)?.max_omega;
            detail.push_str(&format!("; D={d} f=1 max_omega={m}"));
            ok &= m == 2;
        }
        Ok((ok, detail))
    })
}

/// Criterion 7: Hooley counts against `Li(y)/(2qφ(q))` on `Q(√2)`.
pub fn criterion_hooley() -> CriterionResult {
    timed(7, "Hooley counts on Q(sqrt 2)", || {
        let k = field(2);
        let mut ok = true;
        let mut parts = Vec::new();
        for &y in &HOOLEY_YS {
            for &q in &HOOLEY_QS {
                let start = Instant::now();
                let r = stats::hooley_scan(&k, q, y)?;
                let in_range = r.ratio >= HOOLEY_RATIO_RANGE.0 && r.ratio <= HOOLEY_RATIO_RANGE.1;
                ok &= in_range && start.elapsed() <= HOOLEY_TIME_LIMIT;
                parts.push(format!(
                    "q={q} y={y}: {}/{:.1}={:.3}",
                    r.count, r.li_prediction, r.ratio
                ));
            }
        }
        Ok((ok, parts.join("; ")))
    })
}

/// Criterion 8: `#{inert p ≤ 10⁶ : ℓ(p) ≤ y} / y²` stays below a constant
/// and its decimal order of magnitude does not increase with `y`.
pub fn criterion_small_order() -> CriterionResult {
    timed(8, "small-order counts are O(y^2)", || {
        let k = field(2);
        let mut ratios = Vec::new();
        for &y in &SMALL_ORDER_YS {
            let c = stats::small_order_count(&k, SMALL_ORDER_T, y)?;
            ratios.push((y, c, c as f64 / (y * y) as f64));
        }
        let magnitude = |r: f64| {
            if r > 0.0 {
                r.log10().floor() as i64
            } else {
                i64::MIN
            }
        };
        let bounded = ratios.iter().all(|&(_, _, r)| r < SMALL_ORDER_CONSTANT);
        let nonincreasing = ratios
            .windows(2)
            .all(|w| magnitude(w[1].2) <= magnitude(w[0].2));
        let detail = ratios
            .iter()
            .map(|(y, c, r)| format!("y={y}: {c}/y^2={r:.4}"))
            .collect::<Vec<_>>()
            .join("; ");
        Ok((bounded && nonincreasing, detail))
    })
}

/// Relative deviation of `S_α(x)·√(log 3x)/x` from `c_α`.
pub fn density_deviation(k: &QuadraticField, x: u64, c: f64) -> Result<f64> {
    let s = stats::sieve_split_free(k, x)?.count() as f64;
    let normalized = s * (3.0 * x as f64).ln().sqrt() / x as f64;
    Ok((normalized - c).abs() / c)
}

/// Criterion 9: split-free density trend for `Q(i)`.
pub fn criterion_density() -> CriterionResult {
    timed(9, "split-free density trend for Q(i)", || {
        let k = field(-1);
        let c = stats::c_alpha(&k, DENSITY_CUTOFF)?.value;
        let small = density_deviation(&k, DENSITY_X[0], c)?;
        let large = density_deviation(&k, DENSITY_X[1], c)?;
        Ok((
            large < DENSITY_TOLERANCE && large < small,
            format!("c_alpha={c:.6}, deviation {small:.4} at x=1e4, {large:.4} at x=1e6"),
        ))
    })
}

/// Criterion 10: weighted Turán–Kubilius ratios stay bounded.
pub fn criterion_turan_kubilius() -> CriterionResult {
    timed(10, "weighted Turan-Kubilius ratios", || {
        let k = field(-1);
        let mut ok = true;
        let mut parts = Vec::new();
        for function in [TkFunction::OmegaRestricted, TkFunction::CutoffH] {
            let ratios: Vec<f64> = TK_XS
                .iter()
                .map(|&x| stats::tk_report(&k, x, function).map(|r| r.ratio))
                .collect::<Result<_>>()?;
            let bounded = ratios.iter().all(|&r| r < TK_RATIO_LIMIT);
            let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
            let runaway = monotone && ratios[2] > TK_GROWTH_LIMIT * ratios[0];
            ok &= bounded && !runaway;
            parts.push(format!(
                "{function:?}: {}",
                ratios
                    .iter()
                    .map(|r| format!("{r:.4}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// CSV bytes of a scan run on a dedicated pool of `threads` workers.
pub fn scan_bytes(k: &QuadraticField, x: u64, caps: ScanCaps, threads: usize) -> Result<Vec<u8>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    let records = pool.install(|| stats::scan(k, x, caps))?;
    let mut buf = Vec::new();
    stats::write_csv(&records, &mut buf)?;
    Ok(buf)
}

/// Criterion 11: scan output is identical across thread counts.
pub fn criterion_determinism() -> CriterionResult {
    timed(11, "scan determinism across thread counts", || {
        let k = field(DETERMINISM_FIELD);
        let outputs: Vec<Vec<u8>> = DETERMINISM_THREADS
            .iter()
            .map(|&t| scan_bytes(&k, DETERMINISM_X, ScanCaps::default(), t))
            .collect::<Result<_>>()?;
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        Ok((
            same && !outputs[0].is_empty(),
            format!(
                "x={DETERMINISM_X}, threads {:?}, {} bytes each, identical={same}",
                DETERMINISM_THREADS,
                outputs[0].len()
            ),
        ))
    })
}

/// Runs criteria 1 and 2 from one sweep.
pub fn criteria_preclass() -> Vec<CriterionResult> {
    let start = Instant::now();
    match preclass_sweep(&EXPONENT_FIELDS, EXPONENT_F_MAX) {
        Ok(rows) => {
            let elapsed = start.elapsed();
            let mut c1 = criterion_exponent_chain(&rows, elapsed);
            c1.seconds = elapsed.as_secs_f64();
            vec![c1, criterion_preclass_order(&rows)]
        }
        Err(e) => [
            (1, "exponent chain L' | Exp PreCl | L"),
            (2, "pre-class order equals psi"),
        ]
        .into_iter()
        .map(|(id, name)| CriterionResult {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
            seconds: start.elapsed().as_secs_f64(),
        })
        .collect(),
    }
}

/// All criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    let mut out = criteria_preclass();
    out.push(criterion_cyclicity());
    out.push(criterion_class_number_identity());
    out.push(criterion_davenport());
    out.push(criterion_elasticity());
    out.push(criterion_hooley());
    out.push(criterion_small_order());
    out.push(criterion_density());
    out.push(criterion_turan_kubilius());
    out.push(criterion_determinism());
    out
}

/// Group-structure consistency used by criterion 4's companion check.
pub fn class_group_index(k: &QuadraticField, f: u64) -> Result<u64> {
    let cl = classgroups::form_class_group(k, f)?.order();
    Ok(cl / ringarith::princlass_structure(k, f)?.order())
}
