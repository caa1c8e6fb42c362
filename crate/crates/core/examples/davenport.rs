//! Exact Davenport constants against the standard bounds, and the
//! monotonicity of D along PrinCl -> PreCl.

use quadorder::abelian::{
    davenport_bounds, davenport_exact, AbelianGroupStructure, DAVENPORT_SIZE_CAP,
};
use quadorder::{ringarith, QuadraticField};

fn main() -> quadorder::Result<()> {
    for n in [8, 9, 12, 16, 27, 32] {
        for g in AbelianGroupStructure::all_of_order(n) {
            let (lo, hi) = davenport_bounds(&g);
            let exact = davenport_exact(&g, DAVENPORT_SIZE_CAP)?;
            println!(
                "{:<24} lower {lo:>3}  exact {exact:>3}  upper {hi:>3}",
                g.to_string()
            );
        }
    }
    let k = QuadraticField::new(-5)?;
    for f in [3, 6, 7, 9] {
        let pre = ringarith::preclass_structure(&k, f)?;
        let prin = ringarith::princlass_structure(&k, f)?;
        println!(
            "Q(sqrt(-5)) f = {f}: D(PrinCl {prin}) = {}  D(PreCl {pre}) = {}",
            davenport_exact(&prin, DAVENPORT_SIZE_CAP)?,
            davenport_exact(&pre, DAVENPORT_SIZE_CAP)?
        );
    }
    Ok(())
}
