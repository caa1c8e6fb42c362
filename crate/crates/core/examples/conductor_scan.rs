//! CSV scan of split-free conductors, written to stdout.

use quadorder::stats::{scan, write_csv, ScanCaps};
use quadorder::QuadraticField;

fn main() -> quadorder::Result<()> {
    let k = QuadraticField::new(2)?;
    let records = scan(&k, 200, ScanCaps::default())?;
    write_csv(&records, std::io::stdout().lock())
}
