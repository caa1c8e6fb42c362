//! Basic data for a handful of quadratic fields.

use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    for d in [-1, -3, -5, -23, 2, 3, 5, 94] {
        let k = QuadraticField::new(d)?;
        print!(
            "D = {d:>3}  delta = {:>4}  h = {}  L(1,chi) = {:.6}  delta factors = {:?}",
            k.delta(),
            k.class_number()?,
            k.l_one_chi()?,
            k.delta_factorization()
        );
        if k.is_real() {
            let e = k.fundamental_unit()?;
            print!("  eps = ({}, {}) norm {}", e.u, e.v, e.norm);
        }
        println!();
    }
    Ok(())
}
