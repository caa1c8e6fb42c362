//! Class groups of imaginary quadratic orders via reduced forms, checked
//! against the conductor class number formula.

use quadorder::{classgroups, QuadraticField};

fn main() -> quadorder::Result<()> {
    for d in [-1, -2, -3, -5, -14] {
        let k = QuadraticField::new(d)?;
        for f in [1, 2, 3, 5, 6, 10] {
            let g = classgroups::form_class_group(&k, f)?;
            let check = classgroups::class_number_formula_check(&k, f)?;
            println!(
                "D = {d:>3} f = {f:>2}  Cl = {:<12} forms = {:>3} formula = {:>3} {}",
                g.to_string(),
                check.form_count,
                check.formula_value,
                if check.matches { "ok" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
