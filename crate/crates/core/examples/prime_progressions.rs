//! Reciprocal prime sums in progressions against log log x / phi(m).

use quadorder::stats::np_diagnostic;

fn main() -> quadorder::Result<()> {
    for (m, a) in [(3, 1), (3, 2), (8, 1), (8, 7), (12, 5), (30, 7)] {
        let r = np_diagnostic(m, a, 10_000_000)?;
        println!(
            "m = {m:>2} a = {a}  sum = {:.5}  loglog/phi = {:.5}  normalized deviation = {:+.4}",
            r.sum, r.prediction, r.normalized
        );
    }
    Ok(())
}
