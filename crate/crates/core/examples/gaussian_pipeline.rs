//! TMSV through BS -> angular displacement -> BS, then the parity of mode B
//! compared with its closed form.
//!
//!     cargo run --example gaussian_pipeline -- [r] [ell] [phi]

use oam_parity::interferometer::{ideal_pipeline, signal_ideal, DETECTED_MODE};
use oam_parity::Scenario;

fn arg(i: usize, default: f64) -> f64 {
    std::env::args()
        .nth(i)
        .map(|s| s.parse().expect("numeric argument"))
        .unwrap_or(default)
}

fn main() -> oam_parity::Result<()> {
    let scenario = Scenario::new(arg(1, 1.0), arg(2, 1.0) as u32, arg(3, 0.3))?;
    let out = ideal_pipeline(&scenario);

    println!(
        "r = {}, ell = {}, phi = {}, N = {:.6}",
        scenario.r(),
        scenario.ell(),
        scenario.phi(),
        scenario.mean_photons()
    );
    println!("output covariance (x1, p1, x2, p2):");
    for row in out.covariance().row_iter() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>10.6}")).collect();
        println!("  {}", cells.join(" "));
    }
    let parity = out.parity_expectation(DETECTED_MODE)?;
    let closed = signal_ideal(&scenario);
    println!("parity of mode B (matrix route): {parity:.15}");
    println!("parity of mode B (closed form):  {closed:.15}");
    println!("difference: {:.2e}", (parity - closed).abs());
    Ok(())
}
