//! Brute-force Fock-space simulation of the lossless interferometer
//! against the closed-form parity.
//!
//!     cargo run --release --example fock_oracle -- [r]

use std::f64::consts::PI;

use oam_parity::fock::{default_cutoff, run_ideal_oracle};
use oam_parity::interferometer::signal_ideal;
use oam_parity::Scenario;

fn main() -> oam_parity::Result<()> {
    let r: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("numeric argument"))
        .unwrap_or(0.8);
    let cutoff = default_cutoff(r);
    println!("r = {r}, cutoff = {cutoff}");
    println!(
        "{:>8} {:>18} {:>18} {:>10}",
        "phi", "oracle", "closed form", "|diff|"
    );
    for k in 0..=8 {
        let phi = k as f64 * PI / 16.0;
        let s = Scenario::new(r, 1, phi)?;
        let o = run_ideal_oracle(&s, cutoff)?;
        let closed = signal_ideal(&s);
        println!(
            "{phi:>8.4} {:>18.15} {closed:>18.15} {:>10.1e}",
            o.parity,
            (o.parity - closed).abs()
        );
    }
    let o = run_ideal_oracle(&Scenario::new(r, 1, 0.0)?, cutoff)?;
    println!("TMSV truncation leakage: {:.1e}", o.leakage);
    Ok(())
}
