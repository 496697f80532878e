//! Validated sweep descriptions and their row generators.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::interferometer::{mean_photons, NoiseConfig, Scenario, Variant};
use crate::sensitivity::{limits, optimal_sensitivity, sensitivity_closed};

/// Raw noise flags as given on the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NoiseFlags {
    pub loss: Option<f64>,
    pub dark: Option<f64>,
    pub nth: Option<f64>,
    pub transmissivity: Option<f64>,
}

impl NoiseFlags {
    /// Builds the noise for `variant`, rejecting flags that don't apply to it.
    /// Missing relevant flags default to the noiseless value.
    pub fn resolve(&self, variant: Variant) -> Result<NoiseConfig, String> {
        let given = [
            ("--loss", self.loss.is_some(), variant == Variant::Loss),
            ("--dark", self.dark.is_some(), variant == Variant::Dark),
            ("--nth", self.nth.is_some(), variant == Variant::Thermal),
            (
                "--transmissivity",
                self.transmissivity.is_some(),
                variant == Variant::Thermal,
            ),
        ];
        if let Some((flag, ..)) = given.iter().find(|(_, set, relevant)| *set && !relevant) {
            return Err(format!("{flag} does not apply to variant `{variant}`"));
        }
        let base = NoiseConfig::default();
        let noise = match variant {
            Variant::Ideal => Ok(base),
            Variant::Loss => base.with_loss(self.loss.unwrap_or(0.0)),
            Variant::Dark => base.with_dark_rate(self.dark.unwrap_or(0.0)),
            Variant::Thermal => {
                base.with_thermal(self.nth.unwrap_or(0.0), self.transmissivity.unwrap_or(1.0))
            }
        };
        noise.map_err(|e| e.to_string())
    }
}

/// Evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + (max - min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

fn check_range(name: &str, min: f64, max: f64, steps: usize) -> Result<(), String> {
    if steps < 2 {
        return Err(format!("{name} steps must be at least 2"));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(format!("{name} range must be finite"));
    }
    if min > max {
        return Err(format!("{name} range is reversed ({min} > {max})"));
    }
    Ok(())
}

/// A φ sweep at fixed source, OAM and noise. Angles are radians.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variant: Variant,
    pub r: f64,
    pub ell: u32,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub noise: NoiseConfig,
}

impl SweepSpec {
    pub fn new(
        variant: Variant,
        r: f64,
        ell: u32,
        (phi_min, phi_max, phi_steps): (f64, f64, usize),
        noise: NoiseConfig,
    ) -> Result<Self, String> {
        Scenario::new(r, ell, 0.0).map_err(|e| e.to_string())?;
        check_range("phi", phi_min, phi_max, phi_steps)?;
        Ok(Self {
            variant,
            r,
            ell,
            phi_min,
            phi_max,
            phi_steps,
            noise,
        })
    }

    /// One full period `[0, π/(2ℓ)]`.
    pub fn default_phi_max(ell: u32) -> f64 {
        PI / (2.0 * ell as f64)
    }

    pub fn phis(&self) -> Vec<f64> {
        linspace(self.phi_min, self.phi_max, self.phi_steps)
    }

    /// `(phi, signal, delta_phi)` per grid point, in grid order.
    pub fn evaluate(&self, jobs: usize) -> Vec<[f64; 3]> {
        let eval = |phi: f64| {
            let s = Scenario::new(self.r, self.ell, phi).expect("validated");
            let p = sensitivity_closed(self.variant, &s, &self.noise);
            [phi, p.signal, p.delta_phi]
        };
        par_map(&self.phis(), jobs, eval)
    }
}

/// Optimal sensitivity over a range of squeezing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSpec {
    pub variant: Variant,
    pub ell: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub noise: NoiseConfig,
}

pub const DEFAULT_R_RANGE: (f64, f64, usize) = (0.5, 1.5, 101);

impl OptimalSpec {
    pub fn new(
        variant: Variant,
        ell: u32,
        (r_min, r_max, r_steps): (f64, f64, usize),
        noise: NoiseConfig,
    ) -> Result<Self, String> {
        if ell == 0 {
            return Err("--ell must be at least 1".into());
        }
        if r_min < 0.0 {
            return Err("r must be non-negative".into());
        }
        // a single point is allowed when min == max (from --r / --nbar)
        if !(r_steps == 1 && r_min == r_max) {
            check_range("r", r_min, r_max, r_steps)?;
        }
        Ok(Self {
            variant,
            ell,
            r_min,
            r_max,
            r_steps,
            noise,
        })
    }

    pub fn rs(&self) -> Vec<f64> {
        if self.r_steps == 1 {
            vec![self.r_min]
        } else {
            linspace(self.r_min, self.r_max, self.r_steps)
        }
    }

    /// `(r, N, phi_opt, delta_phi_min, hl, snl)` per grid point.
    pub fn evaluate(&self, jobs: usize) -> Vec<[f64; 6]> {
        let eval = |r: f64| {
            let opt =
                optimal_sensitivity(self.variant, r, self.ell, &self.noise).expect("validated");
            let lim = limits(r, self.ell).expect("validated");
            [
                r,
                mean_photons(r),
                opt.phi,
                opt.delta_phi,
                lim.heisenberg,
                lim.shot_noise,
            ]
        };
        par_map(&self.rs(), jobs, eval)
    }
}

/// Maps in parallel on `jobs` threads; output order follows the input.
fn par_map<T: Send, F: Fn(f64) -> T + Sync + Send>(xs: &[f64], jobs: usize, f: F) -> Vec<T> {
    if jobs <= 1 {
        return xs.iter().map(|&x| f(x)).collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(|| xs.par_iter().map(|&x| f(x)).collect())
}
