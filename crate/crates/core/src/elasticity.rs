//! Elasticity of `O_f`: bounds from the Davenport constant of `Cl(O_f)` and
//! a bounded search for irreducible elements with many prime factors in
//! their norm.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{
    davenport_bounds, davenport_exact, AbelianGroupStructure, DAVENPORT_SIZE_CAP,
};
use crate::arith::{self, isqrt};
use crate::classgroups;
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::ringarith;

pub use crate::arith::omega_big;

/// Largest norm bound accepted by [`irreducible_search`].
pub const NORM_BOUND_CAP: u64 = 1_000_000;

/// Davenport constant of `Cl(O_f)`, exact when the group is small enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DavenportValue {
    Exact { value: u64 },
    Bounds { lower: u64, upper: u64 },
}

impl DavenportValue {
    pub fn lower(&self) -> u64 {
        match *self {
            Self::Exact { value } => value,
            Self::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> u64 {
        match *self {
            Self::Exact { value } => value,
            Self::Bounds { upper, .. } => upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElasticityReport {
    pub f: u64,
    pub dav_cl: DavenportValue,
    pub lower: Ratio<u64>,
    /// `None` stands for `∞` (non-split-free `f`).
    pub upper: Option<Ratio<u64>>,
    pub search_max_omega: Option<u32>,
    pub search_bound: Option<u64>,
    pub witnesses: Vec<(i64, i64)>,
}

fn dav_of(g: &AbelianGroupStructure) -> DavenportValue {
    match davenport_exact(g, DAVENPORT_SIZE_CAP) {
        Ok(value) => DavenportValue::Exact { value },
        Err(_) => {
            let (lower, upper) = davenport_bounds(g);
            DavenportValue::Bounds { lower, upper }
        }
    }
}

/// Davenport data for `Cl(O_f)`.
///
/// Imaginary `K` uses the form class group directly. Real `K` goes through
/// `Dav PrinCl ≤ Dav Cl ≤ h_K · Dav PrinCl`.
pub fn class_group_davenport(k: &QuadraticField, f: u64) -> Result<DavenportValue> {
    if !k.is_real() {
        return Ok(dav_of(&classgroups::form_class_group(k, f)?));
    }
    let prin = dav_of(&ringarith::princlass_structure(k, f)?);
    let h = k.class_number()?;
    if h == 1 {
        return Ok(prin);
    }
    Ok(DavenportValue::Bounds {
        lower: prin.lower(),
        upper: h * prin.upper(),
    })
}

/// `½ Dav Cl(O_f) ≤ ρ(O_f) ≤ max(½ Dav Cl(O_f) + (3/2) Ω(f), 1)`.
///
/// Non-split-free `f` is rejected unless `allow_non_split_free`, in which
/// case the upper bound is infinite.
pub fn elasticity_bounds(
    k: &QuadraticField,
    f: u64,
    allow_non_split_free: bool,
) -> Result<ElasticityReport> {
    let split_free = k.is_split_free(f)?;
    if !split_free && !allow_non_split_free {
        return Err(Error::NotSplitFree(f));
    }
    let dav_cl = class_group_davenport(k, f)?;
    let omega = arith::omega_big(f)? as u64;
    let one = Ratio::from_integer(1);
    let lower = one.max(Ratio::new(dav_cl.lower(), 2));
    let upper = split_free.then(|| one.max(Ratio::new(dav_cl.upper() + 3 * omega, 2)));
    Ok(ElasticityReport {
        f,
        dav_cl,
        lower,
        upper,
        search_max_omega: None,
        search_bound: None,
        witnesses: Vec::new(),
    })
}

/// Bounds plus the irreducible search at `norm_bound`.
pub fn elasticity_report(
    k: &QuadraticField,
    f: u64,
    norm_bound: u64,
    allow_non_split_free: bool,
) -> Result<ElasticityReport> {
    let mut report = elasticity_bounds(k, f, allow_non_split_free)?;
    let found = irreducible_search(k, f, norm_bound)?;
    report.search_max_omega = Some(found.max_omega);
    report.search_bound = Some(norm_bound);
    report.witnesses = found.witness.into_iter().collect();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub max_omega: u32,
    /// Lexicographically least `(a, b)` with `a + bω` attaining `max_omega`.
    pub witness: Option<(i64, i64)>,
    pub irreducibles_found: u64,
}

/// Nonzero elements `a + bω` of `O_f` with `1 < Nm ≤ bound`, grouped by norm.
fn elements_by_norm(k: &QuadraticField, f: u64, bound: u64) -> HashMap<u64, Vec<(i64, i64)>> {
    let (tr, _) = k.omega_trace_norm();
    let d_abs = k.d().unsigned_abs();
    // Nm(a + bω) ≥ |D| b² / 4 in both bases
    let b_max = (2 * isqrt(bound / d_abs.max(1)) + 2) as i64;
    let a_span = isqrt(bound) as i64 + 1;
    let step = f as i64;
    let mut map: HashMap<u64, Vec<(i64, i64)>> = HashMap::new();
    let mut b = -(b_max / step) * step;
    while b <= b_max {
        let center = if tr == 1 { -b / 2 } else { 0 };
        for a in center - a_span - 1..=center + a_span + 1 {
            let n = k.norm(a as i128, b as i128);
            if n > 1 && n as u64 <= bound {
                map.entry(n as u64).or_default().push((a, b));
            }
        }
        b += step;
    }
    map
}

/// Whether `(x + yω)/(u + vω)` lies in `O_f`.
fn divides_in_order(k: &QuadraticField, f: u64, num: (i64, i64), den: (i64, i64)) -> bool {
    let (tr, nm) = k.omega_trace_norm();
    let (tr, nm) = (tr as i128, nm as i128);
    let d = k.norm(den.0 as i128, den.1 as i128);
    // conjugate of u + vω is (u + v·tr) − vω
    let (cu, cv) = (den.0 as i128 + den.1 as i128 * tr, -(den.1 as i128));
    let (x, y) = (num.0 as i128, num.1 as i128);
    // (x + yω)(cu + cvω) with ω² = tr·ω − nm
    let re = x * cu - y * cv * nm;
    let im = x * cv + y * cu + y * cv * tr;
    re % d == 0 && im % d == 0 && (im / d) % f as i128 == 0
}

/// Whether `a + bω ∈ O_f` is irreducible in `O_f` (imaginary `K`).
pub fn is_irreducible(k: &QuadraticField, f: u64, a: i64, b: i64) -> Result<bool> {
    if k.is_real() {
        return Err(Error::RealFieldUnsupported);
    }
    if b % f as i64 != 0 {
        return Err(Error::InvalidArgument(format!("{a}+{b}w is not in O_{f}")));
    }
    let n = k.norm(a as i128, b as i128) as u64;
    if n <= 1 {
        return Ok(false);
    }
    let table = elements_by_norm(k, f, n / 2);
    Ok(irreducible_with(k, f, (a, b), n, &table))
}

fn irreducible_with(
    k: &QuadraticField,
    f: u64,
    pi: (i64, i64),
    n: u64,
    table: &HashMap<u64, Vec<(i64, i64)>>,
) -> bool {
    let factors = arith::factor(n).expect("norm within bound");
    for d in arith::divisors(&factors) {
        if d <= 1 || d >= n || d * d > n {
            continue;
        }
        // a proper factorization has a factor of norm ≤ √n
        if let Some(cands) = table.get(&d) {
            if cands.iter().any(|&alpha| divides_in_order(k, f, pi, alpha)) {
                return false;
            }
        }
    }
    true
}

type NormSummary = (u32, Option<(i64, i64)>, u64);

/// Maximum `Ω(Nm π)` over irreducible `π ∈ O_f` with `Nm π ≤ norm_bound`.
///
/// `max_omega / 2` is a lower bound for the elasticity of `O_f`.
pub fn irreducible_search(k: &QuadraticField, f: u64, norm_bound: u64) -> Result<SearchResult> {
    if k.is_real() {
        return Err(Error::RealFieldUnsupported);
    }
    if norm_bound > NORM_BOUND_CAP {
        return Err(Error::bound("norm_bound", norm_bound, NORM_BOUND_CAP));
    }
    let table = elements_by_norm(k, f, norm_bound);
    let mut norms: Vec<u64> = table.keys().copied().collect();
    norms.sort_unstable();
    // (max Omega, witness, irreducible count) per norm
    let per_norm: Vec<NormSummary> = norms
        .par_iter()
        .map(|&n| {
            let omega = arith::omega_big(n).expect("small norm");
            let mut best: Option<(i64, i64)> = None;
            let mut count = 0;
            for &pi in &table[&n] {
                if irreducible_with(k, f, pi, n, &table) {
                    count += 1;
                    best = Some(best.map_or(pi, |b| b.min(pi)));
                }
            }
            (omega, best, count)
        })
        .collect();
    let mut result = SearchResult {
        max_omega: 0,
        witness: None,
        irreducibles_found: 0,
    };
    for (omega, best, count) in per_norm {
        result.irreducibles_found += count;
        let Some(w) = best else { continue };
        if omega > result.max_omega
            || (omega == result.max_omega && result.witness.is_none_or(|x| w < x))
        {
            result.max_omega = omega;
            result.witness = Some(w);
        }
    }
    Ok(result)
}
