//! Per-conductor records over split-free `f ≤ x` and their CSV form.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, SpfTable};
use crate::error::{Error, Result};
use crate::quadfield::QuadraticField;
use crate::ringarith::{self, PreClassGroup, UNIT_ENUMERATION_BOUND};
use crate::stats::sieve::sieve_split_free;

/// Largest `x` accepted by [`scan`].
pub const SCAN_BOUND: u64 = 10_000_000;

pub const DEFAULT_GROUP_CAP: u64 = 2000;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanCaps {
    /// `Exp PreCl(O_f)` is computed for every `f ≤ group_cap`.
    pub group_cap: u64,
    /// Number of extra conductors above `group_cap`, drawn with `seed`,
    /// that also get `Exp PreCl(O_f)`.
    pub sample: u64,
    pub seed: u64,
}

impl Default for ScanCaps {
    fn default() -> Self {
        Self {
            group_cap: DEFAULT_GROUP_CAP,
            sample: 0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Conductors above the group cap chosen for structure computation.
fn sampled(fs: &[u64], caps: ScanCaps) -> HashSet<u64> {
    let above: Vec<u64> = fs.iter().copied().filter(|&f| f > caps.group_cap).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(caps.seed);
    above
        .choose_multiple(&mut rng, caps.sample as usize)
        .copied()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub f: u64,
    pub split_free: bool,
    pub psi: u64,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "Lprime")]
    pub lprime: u64,
    pub ell: Option<u64>,
    pub exp_preclass: Option<u64>,
    #[serde(rename = "rad_psi_over_L")]
    pub rad_psi_over_l: Option<u64>,
    pub omega: u32,
    #[serde(rename = "zsmooth_L")]
    pub zsmooth_l: Option<u64>,
}

pub const CSV_HEADER: &str =
    "f,split_free,psi,L,Lprime,ell,exp_preclass,rad_psi_over_L,omega,zsmooth_L";

/// `z_f = log₂ f / log₄ f` (iterated logarithms), clamped below at 2.
///
/// Returns the clamped value and whether the clamp was applied. The clamp
/// covers every `f` for which `log₄ f` is undefined or not positive.
pub fn z_f(f: u64) -> (f64, bool) {
    let l1 = (f as f64).ln();
    let l2 = l1.ln();
    let l3 = l2.ln();
    let l4 = l3.ln();
    let z = l2 / l4;
    if l1 > 0.0 && l2 > 0.0 && l3 > 0.0 && l4 > 0.0 && z.is_finite() && z >= 2.0 {
        (z, false)
    } else {
        (2.0, true)
    }
}

/// Record for a single `f` from its factorization.
pub fn scan_record(
    k: &QuadraticField,
    f: u64,
    factors: &[(u64, u32)],
    caps: ScanCaps,
) -> Result<ScanRecord> {
    scan_record_with(k, f, factors, f <= caps.group_cap)
}

fn scan_record_with(
    k: &QuadraticField,
    f: u64,
    factors: &[(u64, u32)],
    with_group: bool,
) -> Result<ScanRecord> {
    let psi = ringarith::psi_from_factors(k, factors)?;
    let l = ringarith::l_from_factors(k, factors, false)?;
    let lprime = ringarith::l_from_factors(k, factors, true)?;
    let ell = if k.is_real() {
        Some(ringarith::ell_from_factors(k, f, factors)?)
    } else {
        None
    };
    let exp_preclass = if with_group {
        let pre = PreClassGroup::from_factors(k, f, factors, UNIT_ENUMERATION_BOUND)?;
        Some(pre.quotient(&[]).structure.exponent())
    } else {
        None
    };
    let (z, _) = z_f(f);
    Ok(ScanRecord {
        f,
        split_free: factors.iter().all(|&(p, _)| k.chi(p) != 1),
        psi,
        l,
        lprime,
        ell,
        exp_preclass,
        rad_psi_over_l: Some(arith::rad(psi / l)?),
        omega: factors.iter().map(|&(_, e)| e).sum(),
        zsmooth_l: Some(arith::smooth_part(l, z)?),
    })
}

/// One record per split-free `f ≤ x`, ordered by `f`.
///
/// Work is spread over the current rayon pool; the output does not depend
/// on the number of threads.
pub fn scan(k: &QuadraticField, x: u64, caps: ScanCaps) -> Result<Vec<ScanRecord>> {
    if x > SCAN_BOUND {
        return Err(Error::bound("x", x, SCAN_BOUND));
    }
    let sieve = sieve_split_free(k, x)?;
    let spf = SpfTable::new(x.max(2))?;
    let fs: Vec<u64> = sieve.iter().collect();
    let extra = sampled(&fs, caps);
    fs.par_iter()
        .map(|&f| {
            scan_record_with(
                k,
                f,
                &spf.factor(f)?,
                f <= caps.group_cap || extra.contains(&f),
            )
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(d: i64, f: u64) -> ScanRecord {
        let k = QuadraticField::new(d).unwrap();
        scan_record(&k, f, &arith::factor(f).unwrap(), ScanCaps::default()).unwrap()
    }

    #[test]
    fn record_examples() {
        let r = record(-1, 9);
        assert_eq!((r.psi, r.l, r.rad_psi_over_l), (12, 12, Some(1)));
        // L' keeps only p > 3
        assert_eq!(r.lprime, 1);
        let r = record(-1, 1);
        assert_eq!(
            (r.psi, r.l, r.lprime, r.omega, r.exp_preclass),
            (1, 1, 1, 0, Some(1))
        );
        let r = record(2, 15);
        assert_eq!((r.psi, r.l, r.rad_psi_over_l), (24, 12, Some(2)));
        assert_eq!(
            r.ell,
            Some(ringarith::ell(&QuadraticField::new(2).unwrap(), 15).unwrap())
        );
    }

    #[test]
    fn z_clamp() {
        assert_eq!(z_f(1), (2.0, true));
        assert_eq!(z_f(100_000), (2.0, true));
        let (z, clamped) = z_f(10_000_000);
        assert!(!clamped && z > 2.0);
    }

    #[test]
    fn csv_shape() {
        let k = QuadraticField::new(-1).unwrap();
        let recs = scan(&k, 10, ScanCaps::default()).unwrap();
        assert_eq!(
            recs.iter().map(|r| r.f).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 6, 7, 8, 9]
        );
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "1,true,1,1,1,,1,1,0,1");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn seeded_sampling() {
        let k = QuadraticField::new(-1).unwrap();
        let caps = ScanCaps {
            group_cap: 50,
            sample: 10,
            seed: 7,
        };
        let a = scan(&k, 3000, caps).unwrap();
        let b = scan(&k, 3000, caps).unwrap();
        assert_eq!(a, b);
        let extra = a
            .iter()
            .filter(|r| r.f > 50 && r.exp_preclass.is_some())
            .count();
        assert_eq!(extra, 10);
        let c = scan(&k, 3000, ScanCaps { seed: 8, ..caps }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn cross_module_consistency() {
        for d in [2, 5] {
            let k = QuadraticField::new(d).unwrap();
            for r in scan(
                &k,
                400,
                ScanCaps {
                    group_cap: 400,
                    ..ScanCaps::default()
                },
            )
            .unwrap()
            {
                let ell = r.ell.unwrap();
                let exp = r.exp_preclass.unwrap();
                assert_eq!(exp % ell, 0, "f={}", r.f);
                assert_eq!(r.l % exp, 0);
                assert_eq!(exp % r.lprime, 0);
                let prin = ringarith::princlass_structure(&k, r.f).unwrap();
                assert_eq!((r.psi / r.l) * (r.l / ell), prin.order(), "f={}", r.f);
                assert_eq!(r.psi % r.rad_psi_over_l.unwrap(), 0);
            }
        }
    }
}
