//! Brute-force reference: the lossless scheme simulated on a truncated
//! two-mode Fock basis, with parity read off the photon-number
//! distribution.
//!
//! Only the ideal interferometer is modelled; noise channels would need
//! density matrices and are checked through the Gaussian engine instead.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure_non_negative, Error, Result};
use crate::interferometer::{mean_photons, Scenario};

/// Leakage target of [`default_cutoff`].
pub const DEFAULT_LEAKAGE: f64 = 1e-12;

/// Upper bound on [`default_cutoff`].
pub const MAX_CUTOFF: usize = 128;

/// Pure two-mode state `Σ c_{nm} |n⟩_A |m⟩_B` with `n, m < cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState {
    amplitudes: Vec<Complex64>,
    cutoff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// The two 50:50 beam splitters. Both have the same matrix; the tag only
/// documents where in the pipeline the element sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSplitter {
    First,
    Second,
}

impl TwoModeFockState {
    pub fn vacuum(cutoff: usize) -> Self {
        Self::basis(0, 0, cutoff.max(1))
    }

    /// `|n_a, n_b⟩`.
    pub fn basis(n_a: usize, n_b: usize, cutoff: usize) -> Self {
        assert!(
            n_a < cutoff && n_b < cutoff,
            "basis state outside the cutoff"
        );
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff * cutoff];
        amplitudes[n_a * cutoff + n_b] = Complex64::new(1.0, 0.0);
        Self { amplitudes, cutoff }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>, cutoff: usize) -> Result<Self> {
        if amplitudes.len() != cutoff * cutoff {
            return Err(Error::DimensionMismatch {
                what: "amplitude count must be cutoff²",
                expected: cutoff * cutoff,
                got: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes, cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        self.amplitudes[n_a * self.cutoff + n_b]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Copies the state into a larger per-mode dimension.
    pub fn embed(&self, cutoff: usize) -> Self {
        assert!(cutoff >= self.cutoff, "embed cannot shrink the space");
        let mut out = vec![Complex64::new(0.0, 0.0); cutoff * cutoff];
        for a in 0..self.cutoff {
            for b in 0..self.cutoff {
                out[a * cutoff + b] = self.amplitude(a, b);
            }
        }
        Self {
            amplitudes: out,
            cutoff,
        }
    }

    /// `⟨n⟩` of one mode.
    pub fn mean_photons(&self, mode: Mode) -> f64 {
        self.weighted(|a, b| match mode {
            Mode::A => a as f64,
            Mode::B => b as f64,
        })
    }

    fn weighted<F: Fn(usize, usize) -> f64>(&self, weight: F) -> f64 {
        let mut total = 0.0;
        for a in 0..self.cutoff {
            for b in 0..self.cutoff {
                total += weight(a, b) * self.amplitude(a, b).norm_sqr();
            }
        }
        total
    }
}

/// `t = N/(N+2)`, the ratio of successive TMSV photon-number weights.
pub fn tmsv_ratio(r: f64) -> f64 {
    let n = mean_photons(r);
    n / (n + 2.0)
}

/// Probability mass of the TMSV beyond `m = cutoff - 1`: `t^cutoff`.
pub fn tmsv_leakage(r: f64, cutoff: usize) -> f64 {
    tmsv_ratio(r).powi(cutoff as i32)
}

/// Smallest `M` with `t^M ≤ 1e-12`, capped at [`MAX_CUTOFF`].
pub fn default_cutoff(r: f64) -> usize {
    let t = tmsv_ratio(r);
    (1..=MAX_CUTOFF)
        .find(|&m| t.powi(m as i32) <= DEFAULT_LEAKAGE)
        .unwrap_or(MAX_CUTOFF)
}

/// Truncated TMSV `Σ_{m<cutoff} √((1-t) tᵐ) |m, m⟩`.
pub fn tmsv_fock(r: f64, cutoff: usize) -> Result<TwoModeFockState> {
    let r = ensure_non_negative("r", r)?;
    if cutoff == 0 {
        return Err(Error::param("cutoff", 0.0, "cutoff must be at least 1"));
    }
    let t = tmsv_ratio(r);
    let mut state = TwoModeFockState {
        amplitudes: vec![Complex64::new(0.0, 0.0); cutoff * cutoff],
        cutoff,
    };
    let mut weight = 1.0 - t;
    for m in 0..cutoff {
        state.amplitudes[m * cutoff + m] = Complex64::new(weight.sqrt(), 0.0);
        weight *= t;
    }
    Ok(state)
}

/// Real orthogonal matrix of the beam splitter on the block of `total`
/// photons, indexed by output/input `n_A`.
///
/// On creation operators the beam splitter is `a† -> (a†+b†)/√2`,
/// `b† -> (a†-b†)/√2`. That is the rotation `exp(π/4 · G)`,
/// `G = b†a - a†b`, preceded by the sign `(-1)^{n_B}`. `iG` is similar (via
/// `diag(i^k)`) to a real symmetric tridiagonal matrix with eigenvalues
/// `-total, -total+2, …, total`; the gap of 2 keeps the eigenvectors
/// accurate and the exponential does not depend on their signs.
/// (Building columns by repeated creation operators instead loses all
/// precision beyond ~80 photons.)
fn bs_block(total: usize) -> Arc<DMatrix<f64>> {
    static CACHE: LazyLock<Mutex<HashMap<usize, Arc<DMatrix<f64>>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    if let Some(block) = CACHE.lock().expect("cache lock").get(&total) {
        return Arc::clone(block);
    }
    let n = total + 1;
    let mut sym = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let g = ((k * (total - k + 1)) as f64).sqrt();
        sym[(k - 1, k)] = -g;
        sym[(k, k - 1)] = -g;
    }
    let eig = SymmetricEigen::new(sym);
    let theta = std::f64::consts::FRAC_PI_4;
    // i^k as a quarter-turn count
    let i_pow = |k: usize| Complex64::new(0.0, 1.0).powu(k as u32 % 4);
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| {
            // snap to the exact spectrum
            let exact = ((lambda + total as f64) / 2.0).round() * 2.0 - total as f64;
            Complex64::from_polar(1.0, -theta * exact)
        })
        .collect();
    let q = &eig.eigenvectors;
    let mut block = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let sum: Complex64 = (0..n).map(|m| phases[m] * (q[(j, m)] * q[(k, m)])).sum();
            let rotation = i_pow(j) * sum * i_pow(k).conj();
            let sign = if (total - k).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            block[(j, k)] = sign * rotation.re;
        }
    }
    let block = Arc::new(block);
    CACHE
        .lock()
        .expect("cache lock")
        .insert(total, Arc::clone(&block));
    block
}

/// 50:50 beam splitter whose Heisenberg action is `a -> (a+b)/√2`,
/// `b -> (a-b)/√2`, matching the quadrature matrix of the Gaussian engine.
///
/// Photon number is conserved, so each total-photon block is transformed
/// separately. Output components outside the cutoff are dropped, which
/// shows up as a norm deficit.
pub fn apply_bs_fock(state: &TwoModeFockState, _which: BeamSplitter) -> TwoModeFockState {
    let dim = state.cutoff;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; dim * dim];
    for total in 0..=2 * (dim - 1) {
        let lo = total.saturating_sub(dim - 1);
        let hi = total.min(dim - 1);
        let inputs: Vec<(usize, Complex64)> = (lo..=hi)
            .map(|n_a| (n_a, state.amplitudes[n_a * dim + (total - n_a)]))
            .filter(|&(_, c)| c != zero)
            .collect();
        if inputs.is_empty() {
            continue;
        }
        let u = bs_block(total);
        for k in lo..=hi {
            let amp: Complex64 = inputs.iter().map(|&(n_a, c)| c * u[(k, n_a)]).sum();
            out[k * dim + (total - k)] = amp;
        }
    }
    TwoModeFockState {
        amplitudes: out,
        cutoff: dim,
    }
}

/// Phase `e^{i n θ}` on mode A.
pub fn apply_phase_fock(state: &TwoModeFockState, theta: f64) -> TwoModeFockState {
    let dim = state.cutoff;
    let mut out = state.clone();
    for a in 0..dim {
        let phase = Complex64::from_polar(1.0, a as f64 * theta);
        for b in 0..dim {
            out.amplitudes[a * dim + b] *= phase;
        }
    }
    out
}

/// `P_even - P_odd` of the photon number in `mode`.
pub fn parity_fock(state: &TwoModeFockState, mode: Mode) -> f64 {
    state.weighted(|a, b| {
        let n = match mode {
            Mode::A => a,
            Mode::B => b,
        };
        if n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// Parity computed by the oracle, with the TMSV truncation leakage it was
/// computed under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub parity: f64,
    pub leakage: f64,
    pub cutoff: usize,
}

/// TMSV (truncated at `cutoff`) -> BS1 -> phase `2ℓφ` on A -> BS2 -> parity
/// of B. The truncated TMSV is embedded in a per-mode dimension of
/// `2·cutoff - 1`, enough to hold every photon the beam splitters can move
/// into one mode, so the only approximation is the TMSV tail `t^cutoff`.
pub fn run_ideal_oracle(scenario: &Scenario, cutoff: usize) -> Result<OracleResult> {
    let input = tmsv_fock(scenario.r(), cutoff)?.embed(2 * cutoff - 1);
    let mixed = apply_bs_fock(&input, BeamSplitter::First);
    let shifted = apply_phase_fock(&mixed, scenario.theta());
    let out = apply_bs_fock(&shifted, BeamSplitter::Second);
    Ok(OracleResult {
        parity: parity_fock(&out, Mode::B),
        leakage: tmsv_leakage(scenario.r(), cutoff),
        cutoff,
    })
}
