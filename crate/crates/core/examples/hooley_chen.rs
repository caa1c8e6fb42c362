//! Inert primes where the unit has order dividing (p+1)/q, against Li(y)/(2q phi(q)).

use quadorder::stats::hooley_scan;
use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    for d in [2, 5] {
        let k = QuadraticField::new(d)?;
        for q in [3, 7, 11] {
            let r = hooley_scan(&k, q, 1_000_000)?;
            println!(
                "D = {d} q = {q}  count = {:>6}  prediction = {:>9.1}  ratio = {:.3}",
                r.count, r.li_prediction, r.ratio
            );
        }
    }
    Ok(())
}
