//! Elasticity bounds and a bounded search for long factorizations.

use quadorder::{elasticity, QuadraticField};

fn main() -> quadorder::Result<()> {
    for (d, f) in [(-1, 3), (-1, 6), (-3, 2), (-5, 1), (-5, 11)] {
        let k = QuadraticField::new(d)?;
        let r = elasticity::elasticity_report(&k, f, 2_000, false)?;
        let upper = r.upper.map_or("inf".to_string(), |u| u.to_string());
        println!(
            "D = {d:>3} f = {f}  D(Cl) in [{}, {}]  rho in [{}, {upper}]  max Omega seen = {:?} witness {:?}",
            r.dav_cl.lower(),
            r.dav_cl.upper(),
            r.lower,
            r.search_max_omega,
            r.witnesses.first()
        );
    }
    let k = QuadraticField::new(-1)?;
    match elasticity::elasticity_bounds(&k, 5, false) {
        Ok(_) => println!("unexpected success for f = 5"),
        Err(e) => println!("Q(i), f = 5: {e}"),
    }
    Ok(())
}
