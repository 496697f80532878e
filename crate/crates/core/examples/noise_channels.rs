//! Parity signal under each noise model over one period.
//!
//!     cargo run --example noise_channels

use std::f64::consts::PI;

use oam_parity::interferometer::{matrix_signal, signal};
use oam_parity::{NoiseConfig, Scenario, Variant};

fn main() -> oam_parity::Result<()> {
    let configs = [
        (Variant::Ideal, NoiseConfig::default()),
        (Variant::Loss, NoiseConfig::default().with_loss(0.03)?),
        (Variant::Dark, NoiseConfig::default().with_dark_rate(0.1)?),
        (
            Variant::Thermal,
            NoiseConfig::default().with_thermal(0.1, 0.97)?,
        ),
    ];
    println!("r = 1, ell = 1; L = 0.03, d = 0.1, n_th = 0.1 with T = 0.97");
    print!("{:>8}", "phi");
    for (v, _) in &configs {
        print!("{:>12}", v.name());
    }
    println!("{:>16}", "max |matrix-cf|");
    for k in 0..=8 {
        let phi = k as f64 * PI / 16.0;
        let s = Scenario::new(1.0, 1, phi)?;
        print!("{phi:>8.4}");
        let mut worst: f64 = 0.0;
        for (variant, noise) in &configs {
            let closed = signal(*variant, &s, noise);
            worst = worst.max((matrix_signal(*variant, &s, noise)? - closed).abs());
            print!("{closed:>12.6}");
        }
        println!("{worst:>16.1e}");
    }
    Ok(())
}
