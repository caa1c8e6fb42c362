//! psi, L, L', ell and the pre-class group structure for small conductors.

use quadorder::{ringarith, QuadraticField};

fn main() -> quadorder::Result<()> {
    for d in [-1, 2] {
        let k = QuadraticField::new(d)?;
        println!("Q(sqrt({d}))");
        println!(
            "{:>4} {:>6} {:>6} {:>6} {:>6}  PreCl",
            "f", "psi", "L", "L'", "ell"
        );
        for f in 1..=24 {
            let inv = ringarith::order_invariants(&k, f)?;
            let ell = inv.ell.map_or("-".to_string(), |e| e.to_string());
            println!(
                "{f:>4} {:>6} {:>6} {:>6} {ell:>6}  {}",
                inv.psi,
                inv.l,
                inv.lprime,
                ringarith::preclass_structure(&k, f)?
            );
        }
    }
    Ok(())
}
