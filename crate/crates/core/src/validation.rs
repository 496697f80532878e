//! Cross-check suite run by `oam-parity validate`.
//!
//! Each check measures a deviation and compares it with a named tolerance.
//! Tolerances can be overridden by name.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::fock::{default_cutoff, run_ideal_oracle};
use crate::interferometer::{
    self, h1, h2, k1, k2, r1, r2, ElementSet, NoiseConfig, Scenario, Variant,
};
use crate::sensitivity::{
    default_step, golden_section, limits, optimal_sensitivity, sensitivity_closed,
    sensitivity_numeric, signal_curve,
};

pub const R_GRID: [f64; 4] = [0.1, 0.5, 1.0, 1.5];
pub const ELL_GRID: [u32; 4] = [1, 2, 5, 10];
pub const PHI_POINTS: usize = 50;

/// Published comparison values at `r = 1`, `ℓ = 1`, `L = 0.01`.
pub const PUBLISHED_HL: f64 = 0.1809;
pub const PUBLISHED_LOSS_OPTIMUM: f64 = 0.1968;
pub const PUBLISHED_HL_GAP: f64 = 1.59e-2;

/// `PHI_POINTS` evenly spaced angles covering `[0, π/ℓ]`.
pub fn phi_grid(ell: u32) -> impl Iterator<Item = f64> {
    let span = PI / ell as f64;
    (0..PHI_POINTS).map(move |k| k as f64 * span / (PHI_POINTS - 1) as f64)
}

/// Named tolerances with their defaults.
#[derive(Debug, Clone)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(BTreeMap::from([
            ("matrix_ideal", 1e-12),
            ("matrix_loss", 1e-12),
            ("matrix_thermal", 1e-12),
            ("oracle_low_r", 1e-8),
            ("oracle_high_r", 1e-6),
            ("oracle_vs_matrix", 1e-8),
            ("reductions", 1e-12),
            ("optimum_phi", 1e-6),
            ("optimum_value", 1e-9),
            ("hl_published", 2e-3),
            ("loss_published", 1e-3),
            ("gap_published", 3e-4),
            ("ell_scaling", 1e-9),
            ("visibility_closed", 1e-9),
            ("visibility_oracle", 1e-6),
            ("dark_ratio", 1e-15),
            ("dark_vs_ideal", 5e-3),
            ("noise_monotonic", 1e-12),
            ("thermal_vs_loss", 1e-12),
            ("numeric_derivative", 1e-8),
        ]))
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.keys().copied()
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(format!("tolerance `{name}` must be a non-negative number"));
        }
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(format!(
                "unknown tolerance `{name}`; known: {}",
                self.names().collect::<Vec<_>>().join(", ")
            )),
        }
    }

    /// Parses `name=value`.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), String> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got `{spec}`"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("invalid tolerance value in `{spec}`"))?;
        self.set(name.trim(), value)
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }

    pub fn report_line(&self) -> String {
        format!(
            "[{}] {:<20} deviation {:.3e} (tolerance {:.1e})  {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.deviation,
            self.tolerance,
            self.description
        )
    }
}

fn max_dev<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    // NaN propagates as a failure
    values.into_iter().fold(0.0, |acc: f64, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}

fn scenario(r: f64, ell: u32, phi: f64) -> Scenario {
    Scenario::new(r, ell, phi).expect("grid scenario is valid")
}

/// Max `|matrix route − closed form|` of the mode-B parity over the grid.
pub fn matrix_vs_closed(elements: &ElementSet, variant: Variant, noise: &NoiseConfig) -> f64 {
    max_dev(R_GRID.iter().flat_map(|&r| {
        ELL_GRID.iter().flat_map(move |&ell| {
            phi_grid(ell).map(move |phi| {
                let s = scenario(r, ell, phi);
                match elements.matrix_signal(variant, &s, noise) {
                    Ok(m) => (m - interferometer::signal(variant, &s, noise)).abs(),
                    Err(_) => f64::NAN,
                }
            })
        })
    }))
}

/// Max `|oracle − closed form|` over `ℓ ∈ {1, 3}` at the given squeezings.
pub fn oracle_vs_closed(rs: &[f64]) -> f64 {
    max_dev(rs.iter().flat_map(|&r| {
        [1u32, 3].into_iter().flat_map(move |ell| {
            let cutoff = default_cutoff(r);
            phi_grid(ell).map(move |phi| {
                let s = scenario(r, ell, phi);
                match run_ideal_oracle(&s, cutoff) {
                    Ok(o) => (o.parity - interferometer::signal_ideal(&s)).abs(),
                    Err(_) => f64::NAN,
                }
            })
        })
    }))
}

/// Max `|oracle − matrix route|` at `r = 0.5`, `ℓ ∈ {1, 3}`.
pub fn oracle_vs_matrix(elements: &ElementSet) -> f64 {
    let r = 0.5;
    let cutoff = default_cutoff(r);
    max_dev([1u32, 3].into_iter().flat_map(|ell| {
        phi_grid(ell).map(move |phi| {
            let s = scenario(r, ell, phi);
            let oracle = run_ideal_oracle(&s, cutoff).map(|o| o.parity);
            let matrix = elements.matrix_signal(Variant::Ideal, &s, &NoiseConfig::default());
            match (oracle, matrix) {
                (Ok(o), Ok(m)) => (o - m).abs(),
                _ => f64::NAN,
            }
        })
    }))
}

/// `K1(L=0)=R1`, `K2(L=0)=R2`, `H1(T=1,n=0)=R1`, `H2(T=1)=R2` over the grid.
pub fn reduction_identities() -> f64 {
    max_dev(R_GRID.iter().flat_map(|&r| {
        ELL_GRID.iter().flat_map(move |&ell| {
            phi_grid(ell).map(move |phi| {
                let s = scenario(r, ell, phi);
                [
                    (k1(&s, 0.0) - r1(&s)).abs(),
                    (k2(&s, 0.0) - r2(&s)).abs(),
                    (h1(&s, 0.0, 1.0) - r1(&s)).abs(),
                    (h2(&s, 1.0) - r2(&s)).abs(),
                ]
                .into_iter()
                .fold(0.0, f64::max)
            })
        })
    }))
}

/// Numeric lossless optimum vs `π/(4ℓ)` and `1/(2ℓ√(N(N+2)))`:
/// returns `(max |Δφ_opt location error|, max relative value error)`.
pub fn lossless_optimum() -> (f64, f64) {
    let mut loc: f64 = 0.0;
    let mut val: f64 = 0.0;
    for r in R_GRID {
        for ell in ELL_GRID {
            let o = optimal_sensitivity(Variant::Ideal, r, ell, &NoiseConfig::default())
                .expect("valid grid point");
            let exact = limits(r, ell).expect("valid grid point").min_sensitivity;
            loc = loc.max((o.phi - PI / (4.0 * ell as f64)).abs());
            val = val.max(((o.delta_phi - exact) / exact).abs());
        }
    }
    (loc, val)
}

/// Max over `r ∈ [0.5, 1.5]` (11 points) of `|Δφ(ℓ=2)/Δφ(ℓ=1) − ½|` and
/// `|Δφ(ℓ=10) − Δφ(ℓ=1)/10|` at `L = 0.01`.
pub fn ell_scaling() -> f64 {
    let noise = NoiseConfig::default().with_loss(0.01).expect("valid loss");
    max_dev((0..=10).map(|i| {
        let r = 0.5 + 0.1 * i as f64;
        let opt = |ell| {
            optimal_sensitivity(Variant::Loss, r, ell, &noise)
                .map(|o| o.delta_phi)
                .unwrap_or(f64::NAN)
        };
        let (one, two, ten) = (opt(1), opt(2), opt(10));
        (two / one - 0.5).abs().max((ten - one / 10.0).abs())
    }))
}

/// `(max − min)/(max + min)` of `signal` over one period, from a coarse
/// sweep refined by golden-section search around both extrema.
pub fn sweep_visibility<F: Fn(f64) -> f64>(signal: F, ell: u32, points: usize) -> f64 {
    let period = PI / (2.0 * ell as f64);
    let h = period / (points - 1) as f64;
    let samples: Vec<f64> = (0..points).map(|i| signal(i as f64 * h)).collect();
    let arg = |better: fn(f64, f64) -> bool| {
        (0..points).fold(0, |best, i| {
            if better(samples[i], samples[best]) {
                i
            } else {
                best
            }
        })
    };
    let (imax, imin) = (arg(|a, b| a > b), arg(|a, b| a < b));
    let bracket = |i: usize| ((i as f64 - 1.0) * h, (i as f64 + 1.0) * h);
    let (a, b) = bracket(imax);
    let (_, neg_max) = golden_section(&|phi| -signal(phi), a, b);
    let (a, b) = bracket(imin);
    let (_, min) = golden_section(&signal, a, b);
    let max = -neg_max;
    (max - min) / (max + min)
}

/// `(closed-form deviation, oracle deviation)` of the sweep visibility from
/// `N/(N+2)`; oracle evaluated at `r = 1` with cutoff 80.
pub fn visibility_deviations() -> (f64, f64) {
    let closed = max_dev(R_GRID.iter().flat_map(|&r| {
        ELL_GRID.iter().map(move |&ell| {
            let expected = interferometer::visibility(&scenario(r, ell, 0.0));
            let v = sweep_visibility(
                |phi| interferometer::signal_ideal(&scenario(r, ell, phi)),
                ell,
                201,
            );
            (v - expected).abs()
        })
    }));
    let expected = interferometer::visibility(&scenario(1.0, 1, 0.0));
    let oracle = sweep_visibility(
        |phi| {
            run_ideal_oracle(&scenario(1.0, 1, phi), 80)
                .map(|o| o.parity)
                .unwrap_or(f64::NAN)
        },
        1,
        51,
    );
    (closed, (oracle - expected).abs())
}

/// Max `|signal_dark/signal_ideal − e^{−2d}|` over the grid, `d ∈ {0.01, 0.1}`.
pub fn dark_ratio() -> f64 {
    max_dev([0.01, 0.1].into_iter().flat_map(|d| {
        R_GRID.iter().flat_map(move |&r| {
            ELL_GRID.iter().flat_map(move |&ell| {
                phi_grid(ell).map(move |phi| {
                    let s = scenario(r, ell, phi);
                    let ratio = interferometer::signal_dark(&s, d).expect("valid d")
                        / interferometer::signal_ideal(&s);
                    (ratio - (-2.0 * d).exp()).abs()
                })
            })
        })
    }))
}

/// Relative excess of the `d = 0.01` optimum over the lossless optimum at
/// `r = 1`, `ℓ = 1`.
pub fn dark_vs_ideal() -> f64 {
    let ideal = optimal_sensitivity(Variant::Ideal, 1.0, 1, &NoiseConfig::default())
        .expect("valid")
        .delta_phi;
    let dark = optimal_sensitivity(
        Variant::Dark,
        1.0,
        1,
        &NoiseConfig::default().with_dark_rate(0.01).expect("valid"),
    )
    .expect("valid")
    .delta_phi;
    (dark - ideal) / ideal
}

/// Largest relative decrease of the optimum along increasing `L`, `d` and
/// `n_th` at `r = 1`, `ℓ = 1`. Zero means monotone non-decreasing.
pub fn noise_monotonicity() -> f64 {
    let base = NoiseConfig::default();
    let sequences: [(Variant, Vec<NoiseConfig>); 3] = [
        (
            Variant::Loss,
            [0.0, 0.005, 0.01, 0.02, 0.03, 0.1, 0.3]
                .iter()
                .map(|&l| base.with_loss(l).expect("valid"))
                .collect(),
        ),
        (
            Variant::Dark,
            [0.0, 0.001, 0.01, 0.05, 0.1, 0.3]
                .iter()
                .map(|&d| base.with_dark_rate(d).expect("valid"))
                .collect(),
        ),
        (
            Variant::Thermal,
            [0.0, 0.01, 0.1, 0.5, 1.0, 2.0]
                .iter()
                .map(|&n| base.with_thermal(n, 0.97).expect("valid"))
                .collect(),
        ),
    ];
    max_dev(sequences.iter().flat_map(|(variant, configs)| {
        let optima: Vec<f64> = configs
            .iter()
            .map(|c| {
                optimal_sensitivity(*variant, 1.0, 1, c)
                    .map(|o| o.delta_phi)
                    .unwrap_or(f64::NAN)
            })
            .collect();
        optima
            .windows(2)
            .map(|w| ((w[0] - w[1]) / w[0]).max(0.0))
            .collect::<Vec<_>>()
    }))
}

/// Largest relative amount by which `K1(L)` exceeds `H1(n_th=0, T=1−L)`.
pub fn thermal_vs_loss() -> f64 {
    max_dev([0.01, 0.03, 0.1, 0.5].into_iter().flat_map(|l| {
        R_GRID.iter().flat_map(move |&r| {
            ELL_GRID.iter().flat_map(move |&ell| {
                phi_grid(ell).map(move |phi| {
                    let s = scenario(r, ell, phi);
                    let (k, h) = (k1(&s, l), h1(&s, 0.0, 1.0 - l));
                    ((k - h) / k).max(0.0)
                })
            })
        })
    }))
}

/// Max relative gap between numeric-derivative and closed-form sensitivity,
/// all variants, skipping derivative-zero points.
pub fn numeric_vs_closed() -> f64 {
    let configs = [
        (Variant::Ideal, NoiseConfig::default()),
        (
            Variant::Loss,
            NoiseConfig::default().with_loss(0.01).expect("valid"),
        ),
        (
            Variant::Dark,
            NoiseConfig::default().with_dark_rate(0.1).expect("valid"),
        ),
        (
            Variant::Thermal,
            NoiseConfig::default()
                .with_thermal(0.1, 0.97)
                .expect("valid"),
        ),
    ];
    max_dev(configs.into_iter().flat_map(|(variant, noise)| {
        R_GRID.iter().flat_map(move |&r| {
            ELL_GRID.iter().flat_map(move |&ell| {
                let curve = signal_curve(variant, r, ell, noise);
                phi_grid(ell)
                    .filter_map(|phi| {
                        let closed = sensitivity_closed(variant, &scenario(r, ell, phi), &noise);
                        if !closed.is_bounded() {
                            return None;
                        }
                        let num = sensitivity_numeric(&curve, phi, default_step(ell)).ok()?;
                        Some(((num.delta_phi - closed.delta_phi) / closed.delta_phi).abs())
                    })
                    .collect::<Vec<_>>()
            })
        })
    }))
}

/// Runs every check with the standard element builders.
pub fn run(tolerances: &Tolerances) -> Vec<Check> {
    run_with(&ElementSet::default(), tolerances)
}

/// Runs every check; matrix-route checks use `elements`.
pub fn run_with(elements: &ElementSet, tol: &Tolerances) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, description: &'static str, deviation: f64| {
        checks.push(Check {
            name,
            description,
            deviation,
            tolerance: tol.get(name),
        });
    };

    let loss = NoiseConfig::default().with_loss(0.01).expect("valid");
    let thermal = NoiseConfig::default()
        .with_thermal(0.1, 0.97)
        .expect("valid");
    push(
        "matrix_ideal",
        "4x4 pipeline parity vs 1/sqrt(R1)",
        matrix_vs_closed(elements, Variant::Ideal, &NoiseConfig::default()),
    );
    push(
        "matrix_loss",
        "pipeline + uniform loss (L=0.01) vs 1/sqrt(K1)",
        matrix_vs_closed(elements, Variant::Loss, &loss),
    );
    push(
        "matrix_thermal",
        "8x8 pipeline (n_th=0.1, T=0.97) vs 1/sqrt(H1)",
        matrix_vs_closed(elements, Variant::Thermal, &thermal),
    );
    push(
        "oracle_low_r",
        "Fock oracle vs 1/sqrt(R1), r in {0.2, 0.5, 0.8}",
        oracle_vs_closed(&[0.2, 0.5, 0.8]),
    );
    push(
        "oracle_high_r",
        "Fock oracle vs 1/sqrt(R1), r = 1",
        oracle_vs_closed(&[1.0]),
    );
    push(
        "oracle_vs_matrix",
        "Fock oracle vs 4x4 pipeline parity, r = 0.5",
        oracle_vs_matrix(elements),
    );
    push(
        "reductions",
        "K1(0)=R1, K2(0)=R2, H1(T=1,n=0)=R1, H2(T=1)=R2",
        reduction_identities(),
    );
    let (loc, val) = lossless_optimum();
    push("optimum_phi", "numeric optimum at pi/(4l)", loc);
    push(
        "optimum_value",
        "numeric optimum equals 1/(2l sqrt(N(N+2))) (relative)",
        val,
    );
    let hl = limits(1.0, 1).expect("valid").heisenberg;
    let loss_opt = optimal_sensitivity(Variant::Loss, 1.0, 1, &loss)
        .map(|o| o.delta_phi)
        .unwrap_or(f64::NAN);
    push(
        "hl_published",
        "|1/(2N) - 0.1809| at r=1, l=1",
        (hl - PUBLISHED_HL).abs(),
    );
    push(
        "loss_published",
        "|optimal loss sensitivity - 0.1968| at r=1, l=1, L=0.01",
        (loss_opt - PUBLISHED_LOSS_OPTIMUM).abs(),
    );
    push(
        "gap_published",
        "|(optimum - HL) - 1.59e-2| at r=1, l=1, L=0.01",
        (loss_opt - hl - PUBLISHED_HL_GAP).abs(),
    );
    push(
        "ell_scaling",
        "optimum(l=2)/optimum(l=1) = 1/2 and optimum(l=10) = optimum(l=1)/10, L=0.01",
        ell_scaling(),
    );
    let (vis_closed, vis_oracle) = visibility_deviations();
    push(
        "visibility_closed",
        "sweep visibility of 1/sqrt(R1) vs N/(N+2)",
        vis_closed,
    );
    push(
        "visibility_oracle",
        "sweep visibility of the Fock oracle (r=1, cutoff 80) vs N/(N+2)",
        vis_oracle,
    );
    push(
        "dark_ratio",
        "signal_dark/signal_ideal = exp(-2d), d in {0.01, 0.1}",
        dark_ratio(),
    );
    push(
        "dark_vs_ideal",
        "relative excess of the d=0.01 optimum over the lossless optimum",
        dark_vs_ideal(),
    );
    push(
        "noise_monotonic",
        "optimum non-decreasing in L, d, n_th (largest relative drop)",
        noise_monotonicity(),
    );
    push(
        "thermal_vs_loss",
        "H1(n_th=0, T=1-L) >= K1(L) (largest relative shortfall)",
        thermal_vs_loss(),
    );
    push(
        "numeric_derivative",
        "Richardson-derivative sensitivity vs closed forms (relative)",
        numeric_vs_closed(),
    );
    checks
}
