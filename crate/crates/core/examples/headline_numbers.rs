//! The comparison numbers at r = 1, ell = 1, L = 0.01: Heisenberg limit,
//! optimal lossy sensitivity and their gap, plus the lossless optimum.
//!
//!     cargo run --example headline_numbers

use oam_parity::sensitivity::{hl_gap, limits, optimal_sensitivity};
use oam_parity::validation::{PUBLISHED_HL, PUBLISHED_HL_GAP, PUBLISHED_LOSS_OPTIMUM};
use oam_parity::{NoiseConfig, Variant};

fn main() -> oam_parity::Result<()> {
    let noise = NoiseConfig::default().with_loss(0.01)?;
    let lim = limits(1.0, 1)?;
    let lossy = optimal_sensitivity(Variant::Loss, 1.0, 1, &noise)?;
    let gap = hl_gap(Variant::Loss, 1.0, 1, &noise)?;
    let lossless = optimal_sensitivity(Variant::Ideal, 1.0, 1, &NoiseConfig::default())?;

    println!("{:<28} {:>10} {:>10}", "", "computed", "published");
    println!(
        "{:<28} {:>10.6} {:>10}",
        "Heisenberg limit 1/(2N)", lim.heisenberg, PUBLISHED_HL
    );
    println!(
        "{:<28} {:>10.6} {:>10}",
        "optimum at L = 0.01", lossy.delta_phi, PUBLISHED_LOSS_OPTIMUM
    );
    println!(
        "{:<28} {:>10.6} {:>10}",
        "gap to Heisenberg limit", gap, PUBLISHED_HL_GAP
    );
    println!(
        "{:<28} {:>10.6} {:>10}",
        "lossless optimum", lossless.delta_phi, "-"
    );
    println!("optimal phi at L = 0.01: {:.8}", lossy.phi);
    Ok(())
}
