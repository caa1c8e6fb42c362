//! Number of inert primes p <= Y where the unit has order at most t.

use quadorder::stats::small_order_count;
use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    let k = QuadraticField::new(2)?;
    for t in [10u64, 30, 100] {
        let counts: Vec<u64> = [10_000u64, 100_000, 1_000_000]
            .iter()
            .map(|&y| small_order_count(&k, t, y))
            .collect::<quadorder::Result<_>>()?;
        println!("t = {t:>3}  counts at Y = 1e4, 1e5, 1e6: {counts:?}");
    }
    Ok(())
}
