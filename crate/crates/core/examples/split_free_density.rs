//! Counts of split-free conductors against c_alpha x / sqrt(log 3x).

use quadorder::stats::{self, sieve_split_free};
use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    for d in [-1, -3, 2, 5] {
        let k = QuadraticField::new(d)?;
        let c = stats::c_alpha(&k, 1_000_000)?;
        println!(
            "D = {d:>2}  c_alpha = {:.6} (+/- {:.1e})",
            c.value, c.error_bound
        );
        for x in [10_000u64, 100_000, 1_000_000] {
            let s = sieve_split_free(&k, x)?;
            let pred = c.value * x as f64 / (3.0 * x as f64).ln().sqrt();
            println!(
                "  x = {x:>8}  S = {:>7}  ratio = {:.4}",
                s.count(),
                s.count() as f64 / pred
            );
        }
    }
    Ok(())
}
