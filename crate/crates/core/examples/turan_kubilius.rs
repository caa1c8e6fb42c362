//! Weighted Turan-Kubilius ratios for the three additive functions.

use quadorder::stats::{tk_report, TkFunction};
use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    let k = QuadraticField::new(-1)?;
    for function in [
        TkFunction::OmegaRestricted,
        TkFunction::SmallOmega,
        TkFunction::CutoffH,
    ] {
        for x in [10_000u64, 100_000, 1_000_000] {
            let r = tk_report(&k, x, function)?;
            println!(
                "{function:?} x = {x:>8}  A = {:.4}  B = {:.4}  lhs = {:.4}  ratio = {:.4}",
                r.a, r.b, r.empirical_lhs, r.ratio
            );
        }
    }
    Ok(())
}
