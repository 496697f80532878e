//! Optical elements, full interferometer pipelines and the closed-form
//! parity signals for the lossless, photon-loss, dark-count and
//! thermal-coupling cases.
//!
//! Layout: modes A and B carry the interferometer arms (mode A picks up the
//! `2ℓφ` rotation, mode B is detected). In the thermal construction two
//! environment modes follow, the first coupled to A and the second to B.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{ensure_finite, ensure_non_negative, ensure_unit_interval, Error, Result};
use crate::gaussian::{GaussianState, SymplecticTransform};

/// Index of the detected output mode (B).
pub const DETECTED_MODE: usize = 1;

/// Physical configuration: squeezing `r`, OAM number `ℓ`, angular
/// displacement `φ` (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    r: f64,
    ell: u32,
    phi: f64,
}

impl Scenario {
    pub fn new(r: f64, ell: u32, phi: f64) -> Result<Self> {
        let r = ensure_non_negative("r", r)?;
        let phi = ensure_finite("phi", phi)?;
        if ell == 0 {
            return Err(Error::param("ell", 0.0, "OAM quantum number must be >= 1"));
        }
        Ok(Self { r, ell, phi })
    }

    /// Builds the scenario from the mean photon number `N = 2 sinh² r`.
    pub fn from_mean_photons(nbar: f64, ell: u32, phi: f64) -> Result<Self> {
        let nbar = ensure_non_negative("nbar", nbar)?;
        Self::new(squeezing_for_mean_photons(nbar), ell, phi)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Same source, different angular displacement.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.r, self.ell, phi)
    }

    /// Mean photon number of the input, `N = 2 sinh² r`.
    pub fn mean_photons(&self) -> f64 {
        mean_photons(self.r)
    }

    /// Interferometer phase `2ℓφ`.
    pub fn theta(&self) -> f64 {
        2.0 * self.ell as f64 * self.phi
    }
}

/// `N = 2 sinh² r`.
pub fn mean_photons(r: f64) -> f64 {
    2.0 * r.sinh().powi(2)
}

/// Inverse of [`mean_photons`].
pub fn squeezing_for_mean_photons(nbar: f64) -> f64 {
    (nbar / 2.0).sqrt().asinh()
}

/// Noise parameters. Defaults are the ideal values `L = 0`, `d = 0`,
/// `n_th = 0`, `T = 1`.
///
/// `dark_rate` is the expected number of dark counts per sampling gate; the
/// Poisson-distributed count itself is averaged out analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    loss: f64,
    dark_rate: f64,
    n_thermal: f64,
    transmissivity: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            loss: 0.0,
            dark_rate: 0.0,
            n_thermal: 0.0,
            transmissivity: 1.0,
        }
    }
}

impl NoiseConfig {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn with_loss(mut self, loss: f64) -> Result<Self> {
        self.loss = ensure_unit_interval("loss", loss)?;
        Ok(self)
    }

    pub fn with_dark_rate(mut self, d: f64) -> Result<Self> {
        self.dark_rate = ensure_non_negative("dark_rate", d)?;
        Ok(self)
    }

    pub fn with_thermal(mut self, n_thermal: f64, transmissivity: f64) -> Result<Self> {
        self.n_thermal = ensure_non_negative("n_thermal", n_thermal)?;
        self.transmissivity = ensure_unit_interval("transmissivity", transmissivity)?;
        Ok(self)
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    pub fn dark_rate(&self) -> f64 {
        self.dark_rate
    }

    pub fn n_thermal(&self) -> f64 {
        self.n_thermal
    }

    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }
}

/// Which imperfection a signal or sensitivity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Ideal,
    Loss,
    Dark,
    Thermal,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Ideal,
        Variant::Loss,
        Variant::Dark,
        Variant::Thermal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Ideal => "ideal",
            Variant::Loss => "loss",
            Variant::Dark => "dark",
            Variant::Thermal => "thermal",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ideal" => Ok(Variant::Ideal),
            "loss" => Ok(Variant::Loss),
            "dark" => Ok(Variant::Dark),
            "thermal" => Ok(Variant::Thermal),
            other => Err(format!(
                "unknown variant `{other}` (expected ideal, loss, dark or thermal)"
            )),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------
// Optical elements
// ---------------------------------------------------------------------------

fn check_total_modes(total_modes: usize) -> Result<()> {
    if total_modes == 2 || total_modes == 4 {
        Ok(())
    } else {
        Err(Error::InvalidModes(format!(
            "optical elements act on 2 modes (plus 2 environment modes); got {total_modes}"
        )))
    }
}

/// Pads a two-mode element with identity on the environment modes when
/// `total_modes == 4`.
fn embed(two_mode: SymplecticTransform, total_modes: usize) -> Result<SymplecticTransform> {
    check_total_modes(total_modes)?;
    Ok(if total_modes == 2 {
        two_mode
    } else {
        two_mode.direct_sum(&SymplecticTransform::identity(2))
    })
}

/// 50:50 beam splitter `(1/√2) [[I, I], [I, -I]]` on modes A, B.
pub fn bs_transform(total_modes: usize) -> Result<SymplecticTransform> {
    let h = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        h,   0.0, h,   0.0,
        0.0, h,   0.0, h,
        h,   0.0, -h,  0.0,
        0.0, h,   0.0, -h,
    ]);
    embed(SymplecticTransform::new(m)?, total_modes)
}

/// 2x2 quadrature rotation by `theta`.
pub fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Rotation by `2ℓφ` on mode A, identity elsewhere.
pub fn angular_displacement_transform(
    ell: u32,
    phi: f64,
    total_modes: usize,
) -> Result<SymplecticTransform> {
    ElementSet::default().angular_displacement(ell, phi, total_modes)
}

/// Virtual beam splitters coupling (A, B) to their environment modes with
/// transmissivity `T`: `[[√T I₄, √(1-T) I₄], [√(1-T) I₄, -√T I₄]]`.
pub fn virtual_bs_transform(transmissivity: f64) -> Result<SymplecticTransform> {
    let t = ensure_unit_interval("transmissivity", transmissivity)?;
    let (a, b) = (t.sqrt(), (1.0 - t).sqrt());
    let m = DMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        _ if i % 4 != j % 4 => 0.0,
        (true, true) => a,
        (false, false) => -a,
        _ => b,
    });
    SymplecticTransform::new(m)
}

/// The element builders used by the pipelines. The rotation block is a
/// plain function pointer so a harness can substitute a deliberately wrong
/// one and confirm the validation suite notices.
#[derive(Debug, Clone, Copy)]
pub struct ElementSet {
    pub rotation: fn(f64) -> [[f64; 2]; 2],
}

impl Default for ElementSet {
    fn default() -> Self {
        Self { rotation }
    }
}

impl ElementSet {
    pub fn angular_displacement(
        &self,
        ell: u32,
        phi: f64,
        total_modes: usize,
    ) -> Result<SymplecticTransform> {
        if ell == 0 {
            return Err(Error::param("ell", 0.0, "OAM quantum number must be >= 1"));
        }
        let phi = ensure_finite("phi", phi)?;
        let rot = (self.rotation)(2.0 * ell as f64 * phi);
        let mut m = DMatrix::identity(4, 4);
        for (i, row) in rot.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        embed(SymplecticTransform::new(m)?, total_modes)
    }

    /// `S_BS2 · S_AD · S_BS1` on the two signal modes.
    pub fn ideal_transform(&self, scenario: &Scenario) -> Result<SymplecticTransform> {
        let bs = bs_transform(2)?;
        let ad = self.angular_displacement(scenario.ell, scenario.phi, 2)?;
        SymplecticTransform::chain([&bs, &ad, &bs])
    }

    pub fn ideal_pipeline(&self, scenario: &Scenario) -> Result<GaussianState> {
        GaussianState::two_mode_squeezed_vacuum(scenario.r)?
            .propagate(&self.ideal_transform(scenario)?)
    }

    pub fn loss_pipeline(&self, scenario: &Scenario, loss: f64) -> Result<GaussianState> {
        self.ideal_pipeline(scenario)?.apply_uniform_loss(loss)
    }

    pub fn thermal_pipeline(
        &self,
        scenario: &Scenario,
        n_thermal: f64,
        transmissivity: f64,
    ) -> Result<GaussianState> {
        let input = GaussianState::two_mode_squeezed_vacuum(scenario.r)?
            .direct_sum(&GaussianState::thermal(2, n_thermal)?);
        let bs = bs_transform(4)?;
        let ad = self.angular_displacement(scenario.ell, scenario.phi, 4)?;
        let vbs = virtual_bs_transform(transmissivity)?;
        input.propagate(&SymplecticTransform::chain([&bs, &ad, &vbs, &bs])?)
    }

    /// Mode-B parity through the matrix pipeline for `variant`.
    pub fn matrix_signal(
        &self,
        variant: Variant,
        scenario: &Scenario,
        noise: &NoiseConfig,
    ) -> Result<f64> {
        match variant {
            Variant::Ideal => self
                .ideal_pipeline(scenario)?
                .parity_expectation(DETECTED_MODE),
            Variant::Loss => self
                .loss_pipeline(scenario, noise.loss)?
                .parity_expectation(DETECTED_MODE),
            Variant::Dark => Ok((-2.0 * noise.dark_rate).exp()
                * self
                    .ideal_pipeline(scenario)?
                    .parity_expectation(DETECTED_MODE)?),
            Variant::Thermal => self
                .thermal_pipeline(scenario, noise.n_thermal, noise.transmissivity)?
                .parity_expectation(DETECTED_MODE),
        }
    }
}

/// TMSV through `S_BS2 · S_AD(ℓ, φ) · S_BS1`; a zero-mean two-mode state.
pub fn ideal_pipeline(scenario: &Scenario) -> GaussianState {
    ElementSet::default()
        .ideal_pipeline(scenario)
        .expect("a validated scenario always yields a physical state")
}

/// The ideal output followed by uniform loss `L` on both output modes.
pub fn loss_pipeline(scenario: &Scenario, loss: f64) -> Result<GaussianState> {
    ElementSet::default().loss_pipeline(scenario, loss)
}

/// Eight-dimensional construction with two thermal environment modes:
/// input `diag(Γ_TMSV, Γ_th ⊕ Γ_th)` propagated by
/// `S*_BS2 · S*_VBS · S*_AD · S*_BS1`. Returns all four modes.
pub fn thermal_pipeline(
    scenario: &Scenario,
    n_thermal: f64,
    transmissivity: f64,
) -> Result<GaussianState> {
    ElementSet::default().thermal_pipeline(scenario, n_thermal, transmissivity)
}

/// Mode-B parity from the matrix pipelines (the dark-count case scales the
/// ideal matrix result by `e^{-2d}`).
pub fn matrix_signal(variant: Variant, scenario: &Scenario, noise: &NoiseConfig) -> Result<f64> {
    ElementSet::default().matrix_signal(variant, scenario, noise)
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// `R1 = 1 + N(N+2) cos²(2ℓφ)`.
pub fn r1(s: &Scenario) -> f64 {
    let n = s.mean_photons();
    1.0 + n * (n + 2.0) * s.theta().cos().powi(2)
}

/// `R2 = ℓ N(N+2) sin(4ℓφ)`.
pub fn r2(s: &Scenario) -> f64 {
    let n = s.mean_photons();
    s.ell as f64 * n * (n + 2.0) * (2.0 * s.theta()).sin()
}

/// `K1 = 1 + ½(1-L)² [N(N+2) cos(4ℓφ) + N²] + (1-L²) N`.
pub fn k1(s: &Scenario, loss: f64) -> f64 {
    let n = s.mean_photons();
    let keep = 1.0 - loss;
    1.0 + 0.5 * keep * keep * (n * (n + 2.0) * (2.0 * s.theta()).cos() + n * n)
        + (1.0 - loss * loss) * n
}

/// `K2 = ℓ (1-L)² N(N+2) sin(4ℓφ)`.
pub fn k2(s: &Scenario, loss: f64) -> f64 {
    let n = s.mean_photons();
    let keep = 1.0 - loss;
    s.ell as f64 * keep * keep * n * (n + 2.0) * (2.0 * s.theta()).sin()
}

/// Mode-B `det Γ` of the thermal-coupling pipeline:
///
/// `H1 = T² R1 + 2T(1-T)(2n_th+1)(N+1) + (1-T)²(2n_th+1)²`.
///
/// The detected block is `T Γ_B + (1-T)(2n_th+1) I`, where `Γ_B` is the ideal
/// block with `det Γ_B = R1` and `tr Γ_B = 2(N+1)`.
pub fn h1(s: &Scenario, n_thermal: f64, transmissivity: f64) -> f64 {
    let n = s.mean_photons();
    let t = transmissivity;
    let env = (1.0 - t) * (2.0 * n_thermal + 1.0);
    t * t * r1(s) + 2.0 * t * env * (n + 1.0) + env * env
}

/// The published thermal expression
///
/// `T²/4 {2cos²(2ℓφ)[2N(N+2)+1] - cos(4ℓφ) + 7} + 1 + 4(n² + n)(1-T)² - 2T
///  + 2(2n+1)(1-T)(N+1)`.
///
/// It exceeds [`h1`] by exactly `2(2n_th+1)(1-T)²(N+1)`, so it does not
/// describe the eight-mode pipeline; kept for comparison only.
pub fn h1_printed(s: &Scenario, n_thermal: f64, transmissivity: f64) -> f64 {
    let n = s.mean_photons();
    let t = transmissivity;
    let th = s.theta();
    t * t / 4.0 * (2.0 * th.cos().powi(2) * (2.0 * n * (n + 2.0) + 1.0) - (2.0 * th).cos() + 7.0)
        + 1.0
        + 4.0 * (n_thermal * n_thermal + n_thermal) * (1.0 - t).powi(2)
        - 2.0 * t
        + 2.0 * (2.0 * n_thermal + 1.0) * (1.0 - t) * (n + 1.0)
}

/// `H2 = ℓ T² sin(4ℓφ) N(N+2)`.
pub fn h2(s: &Scenario, transmissivity: f64) -> f64 {
    let n = s.mean_photons();
    s.ell as f64 * transmissivity * transmissivity * (2.0 * s.theta()).sin() * n * (n + 2.0)
}

/// Lossless parity `1/√R1`.
pub fn signal_ideal(s: &Scenario) -> f64 {
    1.0 / r1(s).sqrt()
}

/// Parity with photon loss `L`: `1/√K1`.
pub fn signal_loss(s: &Scenario, loss: f64) -> Result<f64> {
    let loss = ensure_unit_interval("loss", loss)?;
    Ok(1.0 / k1(s, loss).sqrt())
}

/// Parity with dark counts: `e^{-2d} / √R1`.
pub fn signal_dark(s: &Scenario, dark_rate: f64) -> Result<f64> {
    let d = ensure_non_negative("dark_rate", dark_rate)?;
    Ok((-2.0 * d).exp() * signal_ideal(s))
}

/// Parity with thermal coupling: `1/√H1`.
pub fn signal_thermal(s: &Scenario, n_thermal: f64, transmissivity: f64) -> Result<f64> {
    let n = ensure_non_negative("n_thermal", n_thermal)?;
    let t = ensure_unit_interval("transmissivity", transmissivity)?;
    Ok(1.0 / h1(s, n, t).sqrt())
}

/// Closed-form signal dispatch.
pub fn signal(variant: Variant, s: &Scenario, noise: &NoiseConfig) -> f64 {
    // NoiseConfig fields are validated at construction
    match variant {
        Variant::Ideal => signal_ideal(s),
        Variant::Loss => 1.0 / k1(s, noise.loss).sqrt(),
        Variant::Dark => (-2.0 * noise.dark_rate).exp() * signal_ideal(s),
        Variant::Thermal => 1.0 / h1(s, noise.n_thermal, noise.transmissivity).sqrt(),
    }
}

/// Fringe visibility `N/(N+2)` of the lossless signal.
pub fn visibility(s: &Scenario) -> f64 {
    let n = s.mean_photons();
    n / (n + 2.0)
}
