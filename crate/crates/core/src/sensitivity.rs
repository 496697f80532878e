//! Error-propagation sensitivity `Δφ = √(1 - ⟨Π⟩²) / |∂⟨Π⟩/∂φ|` for every
//! signal variant, its optimum over `φ`, and the reference limits.
//!
//! Parity squares to the identity, so `ΔΠ = √(1 - ⟨Π⟩²)`.

use std::f64::consts::PI;

use crate::error::{ensure_non_negative, Error, Result};
use crate::interferometer::{self, mean_photons, NoiseConfig, Scenario, Variant};

/// Derivative magnitudes below this are treated as zero and the
/// sensitivity is reported as unbounded.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Number of interior points in the coarse optimisation grid.
pub const OPTIMIZER_GRID: usize = 2000;

/// Width in `φ` at which the golden-section refinement stops.
pub const OPTIMIZER_PHI_TOLERANCE: f64 = 1e-10;

/// Sensitivity at one working point. `delta_phi` is `f64::INFINITY` where
/// the signal derivative vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub phi: f64,
    pub delta_phi: f64,
    pub signal: f64,
}

impl SensitivityPoint {
    pub fn is_bounded(&self) -> bool {
        self.delta_phi.is_finite()
    }
}

/// Minimum of `Δφ` over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    /// `NaN` when no point of the period has finite sensitivity.
    pub phi: f64,
    pub delta_phi: f64,
}

/// Reference sensitivities for a source of `N` photons and OAM `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSet {
    /// `1/(2ℓN)`
    pub heisenberg: f64,
    /// `1/(2ℓ√N)`
    pub shot_noise: f64,
    /// `1/(2ℓ√(N(N+2)))`, the lossless optimum.
    pub min_sensitivity: f64,
}

/// Every closed-form signal here has the shape
/// `⟨Π⟩ = A / √(offset + contrast·cos²(2ℓφ))`.
///
/// `excess = offset - A²` is carried separately so `1 - ⟨Π⟩²` can be formed
/// without cancellation near the signal maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalShape {
    pub amplitude: f64,
    pub offset: f64,
    pub excess: f64,
    pub contrast: f64,
    pub ell: u32,
}

impl SignalShape {
    pub fn new(variant: Variant, r: f64, ell: u32, noise: &NoiseConfig) -> Self {
        let n = mean_photons(r);
        let m = n * (n + 2.0);
        match variant {
            Variant::Ideal => Self {
                amplitude: 1.0,
                offset: 1.0,
                excess: 0.0,
                contrast: m,
                ell,
            },
            Variant::Loss => {
                // K1 = 1 + 2NTL + T²N(N+2)cos²(2ℓφ), T = 1 - L
                let l = noise.loss();
                let t = 1.0 - l;
                let excess = 2.0 * n * t * l;
                Self {
                    amplitude: 1.0,
                    offset: 1.0 + excess,
                    excess,
                    contrast: t * t * m,
                    ell,
                }
            }
            Variant::Dark => {
                let d = noise.dark_rate();
                Self {
                    amplitude: (-2.0 * d).exp(),
                    offset: 1.0,
                    excess: -(-4.0 * d).exp_m1(),
                    contrast: m,
                    ell,
                }
            }
            Variant::Thermal => {
                let t = noise.transmissivity();
                let g = 2.0 * noise.n_thermal() + 1.0;
                let u = 1.0 - t;
                let offset = t * t + 2.0 * t * u * g * (n + 1.0) + u * u * g * g;
                let excess = u * (-(1.0 + t) + 2.0 * t * g * (n + 1.0) + u * g * g);
                Self {
                    amplitude: 1.0,
                    offset,
                    excess,
                    contrast: t * t * m,
                    ell,
                }
            }
        }
    }

    fn theta(&self, phi: f64) -> f64 {
        2.0 * self.ell as f64 * phi
    }

    pub fn signal(&self, phi: f64) -> f64 {
        let c = self.theta(phi).cos();
        self.amplitude / (self.offset + self.contrast * c * c).sqrt()
    }

    /// `∂⟨Π⟩/∂φ = 2Aℓ·contrast·sinθ cosθ / Q^{3/2}`.
    pub fn derivative(&self, phi: f64) -> f64 {
        let (s, c) = self.theta(phi).sin_cos();
        let q = self.offset + self.contrast * c * c;
        2.0 * self.amplitude * self.ell as f64 * self.contrast * s * c / q.powf(1.5)
    }

    pub fn sensitivity(&self, phi: f64) -> SensitivityPoint {
        let (s, c) = self.theta(phi).sin_cos();
        let q = self.offset + self.contrast * c * c;
        let signal = self.amplitude / q.sqrt();
        let ell = self.ell as f64;
        let delta_phi = if self.contrast <= 0.0 {
            f64::INFINITY
        } else if self.excess == 0.0 {
            // 1 - ⟨Π⟩² and the derivative share a factor |cos θ|
            let denom = 2.0 * self.amplitude * ell * self.contrast.sqrt() * s.abs() / q;
            if denom < DERIVATIVE_FLOOR {
                f64::INFINITY
            } else {
                1.0 / denom
            }
        } else {
            let deriv = 2.0 * self.amplitude * ell * self.contrast * (s * c).abs() / q.powf(1.5);
            if deriv < DERIVATIVE_FLOOR {
                f64::INFINITY
            } else {
                ((self.excess + self.contrast * c * c) / q).sqrt() / deriv
            }
        };
        SensitivityPoint {
            phi,
            delta_phi,
            signal,
        }
    }
}

/// Closed-form error-propagation sensitivity at `scenario.phi()`.
pub fn sensitivity_closed(
    variant: Variant,
    scenario: &Scenario,
    noise: &NoiseConfig,
) -> SensitivityPoint {
    SignalShape::new(variant, scenario.r(), scenario.ell(), noise).sensitivity(scenario.phi())
}

/// Default finite-difference step `1e-4 · π/(2ℓ)`.
pub fn default_step(ell: u32) -> f64 {
    1e-4 * PI / (2.0 * ell as f64)
}

/// Central difference at steps `h, h/2, h/4` combined by Richardson
/// extrapolation (error `O(h⁶)`).
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let central = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let d0 = central(h);
    let d1 = central(h / 2.0);
    let d2 = central(h / 4.0);
    let e1 = d1 + (d1 - d0) / 3.0;
    let e2 = d2 + (d2 - d1) / 3.0;
    e2 + (e2 - e1) / 15.0
}

/// Error-propagation sensitivity of an arbitrary parity signal, with the
/// derivative taken numerically.
pub fn sensitivity_numeric<F: Fn(f64) -> f64>(
    signal_fn: F,
    phi: f64,
    step: f64,
) -> Result<SensitivityPoint> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("step", step, "must be positive and finite"));
    }
    let signal = signal_fn(phi);
    if !signal.is_finite() {
        return Err(Error::param(
            "signal",
            signal,
            "signal is not finite at phi",
        ));
    }
    let deriv = richardson_derivative(&signal_fn, phi, step);
    let delta_phi = if deriv.abs() < DERIVATIVE_FLOOR {
        f64::INFINITY
    } else {
        (1.0 - signal * signal).max(0.0).sqrt() / deriv.abs()
    };
    Ok(SensitivityPoint {
        phi,
        delta_phi,
        signal,
    })
}

/// Minimises the closed-form sensitivity over `φ ∈ (0, π/(2ℓ))`: coarse grid
/// of [`OPTIMIZER_GRID`] points, then golden-section refinement.
pub fn optimal_sensitivity(
    variant: Variant,
    r: f64,
    ell: u32,
    noise: &NoiseConfig,
) -> Result<Optimum> {
    // validates r and ell
    Scenario::new(r, ell, 0.0)?;
    let shape = SignalShape::new(variant, r, ell, noise);
    Ok(minimize_over_period(
        |phi| shape.sensitivity(phi).delta_phi,
        ell,
    ))
}

/// Generic minimiser over one period `(0, π/(2ℓ))`.
pub fn minimize_over_period<F: Fn(f64) -> f64>(f: F, ell: u32) -> Optimum {
    let period = PI / (2.0 * ell as f64);
    let h = period / OPTIMIZER_GRID as f64;
    let best = (1..OPTIMIZER_GRID)
        .map(|i| (i, f(i as f64 * h)))
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let Some((i, _)) = best else {
        return Optimum {
            phi: f64::NAN,
            delta_phi: f64::INFINITY,
        };
    };
    let (phi, delta_phi) = golden_section(&f, (i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
    Optimum { phi, delta_phi }
}

/// Golden-section search for a minimum inside `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > OPTIMIZER_PHI_TOLERANCE {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Heisenberg, shot-noise and lossless-optimum references. All are
/// infinite when `N = 0`.
pub fn limits(r: f64, ell: u32) -> Result<LimitSet> {
    let r = ensure_non_negative("r", r)?;
    if ell == 0 {
        return Err(Error::param("ell", 0.0, "OAM quantum number must be >= 1"));
    }
    let n = mean_photons(r);
    let pre = 2.0 * ell as f64;
    Ok(LimitSet {
        heisenberg: 1.0 / (pre * n),
        shot_noise: 1.0 / (pre * n.sqrt()),
        min_sensitivity: 1.0 / (pre * (n * (n + 2.0)).sqrt()),
    })
}

/// Optimal sensitivity minus the Heisenberg limit; positive means worse
/// than the HL.
pub fn hl_gap(variant: Variant, r: f64, ell: u32, noise: &NoiseConfig) -> Result<f64> {
    let best = optimal_sensitivity(variant, r, ell, noise)?;
    Ok(best.delta_phi - limits(r, ell)?.heisenberg)
}

/// Closed-form signal as a function of `φ` for fixed source and noise, for
/// feeding [`sensitivity_numeric`].
pub fn signal_curve(variant: Variant, r: f64, ell: u32, noise: NoiseConfig) -> impl Fn(f64) -> f64 {
    move |phi| {
        let s = Scenario::new(r, ell, phi).expect("finite phi");
        interferometer::signal(variant, &s, &noise)
    }
}
