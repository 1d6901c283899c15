//! The full built-in battery, printed as a table. This is exactly what
//! the CLI's `replicate` command runs; expect it to take tens of seconds.
//!
//! Run with: cargo run --release --example builtin_checks

use equibreak::battery;

fn main() {
    let checks = battery::run_all();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failed = 0;
    for c in &checks {
        println!(
            "{} {:<width$}  expected {} | observed {}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.expected,
            c.observed,
        );
        if !c.pass {
            failed += 1;
        }
    }
    println!("\n{} checks, {} failed", checks.len(), failed);
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
