//! Runs every acceptance check and prints one line per criterion.
//!
//! Slow in debug builds; use `cargo run --release --example verify`.

fn main() {
    let results = quadorder::verify::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
}
