//! Optimal working point and sensitivity against the reference limits,
//! for increasing OAM.
//!
//!     cargo run --example sensitivity_optimum -- [r] [loss]

use oam_parity::sensitivity::{limits, optimal_sensitivity};
use oam_parity::{NoiseConfig, Variant};

fn main() -> oam_parity::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|s| s.parse::<f64>().expect("numeric argument"));
    let r = args.next().unwrap_or(1.0);
    let loss = args.next().unwrap_or(0.01);
    let noise = NoiseConfig::default().with_loss(loss)?;

    println!("r = {r}, L = {loss}");
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "ell", "phi_opt", "lossless", "lossy", "HL", "SNL"
    );
    for ell in [1, 2, 5, 10] {
        let ideal = optimal_sensitivity(Variant::Ideal, r, ell, &NoiseConfig::default())?;
        let lossy = optimal_sensitivity(Variant::Loss, r, ell, &noise)?;
        let lim = limits(r, ell)?;
        println!(
            "{ell:>4} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            lossy.phi, ideal.delta_phi, lossy.delta_phi, lim.heisenberg, lim.shot_noise
        );
    }
    Ok(())
}
