//! Fixed parameter sets for the figure data.

use std::fmt;
use std::str::FromStr;

use crate::interferometer::{NoiseConfig, Variant};

use super::sweep::{OptimalSpec, SweepSpec, DEFAULT_R_RANGE};

/// Points per φ curve over one period.
pub const FIGURE_PHI_STEPS: usize = 501;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    F2a,
    F2b,
    F3a,
    F3b,
    F4a,
    F4b,
    F5,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4a,
        FigureId::F4b,
        FigureId::F5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5 => "5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| {
                format!("unknown figure id `{s}` (expected one of 2a, 2b, 3a, 3b, 4a, 4b, 5)")
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// Sensitivity vs φ.
    Phi(SweepSpec),
    /// Optimal sensitivity vs r.
    Optimal(OptimalSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub file: String,
    pub kind: CurveKind,
}

impl Curve {
    pub fn variant(&self) -> Variant {
        match &self.kind {
            CurveKind::Phi(s) => s.variant,
            CurveKind::Optimal(s) => s.variant,
        }
    }

    pub fn noise(&self) -> NoiseConfig {
        match &self.kind {
            CurveKind::Phi(s) => s.noise,
            CurveKind::Optimal(s) => s.noise,
        }
    }
}

fn tag(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

fn phi_curve(id: FigureId, variant: Variant, noise: NoiseConfig, label: String) -> Curve {
    let spec = SweepSpec::new(
        variant,
        1.0,
        1,
        (0.0, SweepSpec::default_phi_max(1), FIGURE_PHI_STEPS),
        noise,
    )
    .expect("fixed parameters are valid");
    Curve {
        file: format!("fig{id}_{label}.csv"),
        kind: CurveKind::Phi(spec),
    }
}

fn optimal_curve(
    id: FigureId,
    variant: Variant,
    ell: u32,
    noise: NoiseConfig,
    label: String,
) -> Curve {
    let spec =
        OptimalSpec::new(variant, ell, DEFAULT_R_RANGE, noise).expect("fixed parameters are valid");
    Curve {
        file: format!("fig{id}_{label}.csv"),
        kind: CurveKind::Optimal(spec),
    }
}

/// The curves of a figure, in manifest order.
pub fn curves(id: FigureId) -> Vec<Curve> {
    let base = NoiseConfig::default();
    let loss = |l: f64| base.with_loss(l).expect("valid");
    let dark = |d: f64| base.with_dark_rate(d).expect("valid");
    let thermal = |t: f64| base.with_thermal(0.1, t).expect("valid");
    match id {
        FigureId::F2a => [0.0, 0.01, 0.03]
            .map(|l| phi_curve(id, Variant::Loss, loss(l), format!("L{}", tag(l))))
            .to_vec(),
        FigureId::F2b => [0.01, 0.03]
            .map(|l| optimal_curve(id, Variant::Loss, 1, loss(l), format!("L{}", tag(l))))
            .to_vec(),
        FigureId::F3a => [0.01, 0.1]
            .map(|d| phi_curve(id, Variant::Dark, dark(d), format!("d{}", tag(d))))
            .to_vec(),
        FigureId::F3b => [0.01, 0.1]
            .map(|d| optimal_curve(id, Variant::Dark, 1, dark(d), format!("d{}", tag(d))))
            .to_vec(),
        FigureId::F4a => [0.99, 0.97]
            .map(|t| phi_curve(id, Variant::Thermal, thermal(t), format!("T{}", tag(t))))
            .to_vec(),
        FigureId::F4b => [0.99, 0.97]
            .map(|t| optimal_curve(id, Variant::Thermal, 1, thermal(t), format!("T{}", tag(t))))
            .to_vec(),
        FigureId::F5 => [1, 2]
            .map(|ell| optimal_curve(id, Variant::Loss, ell, loss(0.01), format!("ell{ell}")))
            .to_vec(),
    }
}
