//! Runs the cross-check suite and prints one line per check.
//!
//!     cargo run --release --example validate

use oam_parity::validation::{run, Tolerances};

fn main() {
    let checks = run(&Tolerances::default());
    for c in &checks {
        println!("{}", c.report_line());
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{} checks, {failed} failed", checks.len());
}
