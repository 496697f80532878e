use std::f64::consts::PI;

use nalgebra::DMatrix;
use oam_parity::interferometer::{
    bs_transform, ideal_pipeline, signal, signal_dark, signal_ideal, ElementSet,
};
use oam_parity::sensitivity::{limits, sensitivity_closed};
use oam_parity::{GaussianState, NoiseConfig, Scenario, SymplecticTransform, Variant};
use proptest::prelude::*;

fn squeezer(s: f64, mode: usize) -> SymplecticTransform {
    let mut m = DMatrix::identity(4, 4);
    m[(2 * mode, 2 * mode)] = (-s).exp();
    m[(2 * mode + 1, 2 * mode + 1)] = s.exp();
    SymplecticTransform::new(m).unwrap()
}

fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    m.clone().cholesky().is_some()
}

fn noise_strategy() -> impl Strategy<Value = (Variant, NoiseConfig)> {
    prop_oneof![
        Just((Variant::Ideal, NoiseConfig::default())),
        (0.0..1.0f64).prop_map(|l| (Variant::Loss, NoiseConfig::default().with_loss(l).unwrap())),
        (0.0..0.5f64).prop_map(|d| (
            Variant::Dark,
            NoiseConfig::default().with_dark_rate(d).unwrap()
        )),
        (0.0..2.0f64, 0.0..=1.0f64).prop_map(|(n, t)| (
            Variant::Thermal,
            NoiseConfig::default().with_thermal(n, t).unwrap()
        )),
    ]
}

proptest! {
    #[test]
    fn propagation_keeps_covariance_physical(
        r in 0.0..1.5f64, s in -1.0..1.0f64, ell in 1u32..12, phi in -3.0..3.0f64,
    ) {
        let chain = SymplecticTransform::chain([
            &squeezer(s, 0),
            &bs_transform(2).unwrap(),
            &ElementSet::default().angular_displacement(ell, phi, 2).unwrap(),
            &squeezer(-s / 2.0, 1),
        ]).unwrap();
        prop_assert!((chain.determinant() - 1.0).abs() < 1e-9);
        let out = GaussianState::two_mode_squeezed_vacuum(r).unwrap().propagate(&chain).unwrap();
        let cov = out.covariance();
        prop_assert!((cov - cov.transpose()).amax() < 1e-12);
        prop_assert!(is_positive_definite(cov));
        // pure in, pure out
        prop_assert!((cov.determinant() - 1.0).abs() < 1e-8 * cov.amax().powi(4));
    }

    #[test]
    fn marginal_commutes_with_loss(r in 0.0..1.5f64, phi in 0.0..PI, l in 0.0..=1.0f64) {
        let state = ideal_pipeline(&Scenario::new(r, 2, phi).unwrap());
        for mode in [0usize, 1] {
            let a = state.apply_uniform_loss(l).unwrap().marginal(&[mode]).unwrap();
            let b = state.marginal(&[mode]).unwrap().apply_uniform_loss(l).unwrap();
            prop_assert!((a.covariance() - b.covariance()).amax() < 1e-12);
        }
    }

    #[test]
    fn signal_has_period_pi_over_2ell(
        r in 0.0..1.5f64, ell in 1u32..20, phi in -2.0..2.0f64, (variant, noise) in noise_strategy(),
    ) {
        let a = signal(variant, &Scenario::new(r, ell, phi).unwrap(), &noise);
        let b = signal(variant, &Scenario::new(r, ell, phi + PI / (2.0 * ell as f64)).unwrap(), &noise);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn signal_depends_only_on_2ell_phi(
        r in 0.0..1.5f64, ell in 1u32..20, phi in -1.0..1.0f64, (variant, noise) in noise_strategy(),
    ) {
        let a = signal(variant, &Scenario::new(r, ell, phi).unwrap(), &noise);
        let b = signal(variant, &Scenario::new(r, 1, ell as f64 * phi).unwrap(), &noise);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn signal_is_a_parity_value(
        r in 0.0..2.0f64, ell in 1u32..20, phi in -2.0..2.0f64, (variant, noise) in noise_strategy(),
    ) {
        let v = signal(variant, &Scenario::new(r, ell, phi).unwrap(), &noise);
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-15);
    }

    #[test]
    fn dark_counts_scale_the_signal(r in 0.0..1.5f64, ell in 1u32..10, phi in 0.0..PI, d in 0.0..1.0f64) {
        let s = Scenario::new(r, ell, phi).unwrap();
        let ratio = signal_dark(&s, d).unwrap() / signal_ideal(&s);
        prop_assert!((ratio - (-2.0 * d).exp()).abs() < 1e-14);
    }

    #[test]
    fn ideal_sensitivity_never_beats_the_optimum(r in 0.05..1.5f64, ell in 1u32..10, phi in 0.0..PI) {
        let p = sensitivity_closed(Variant::Ideal, &Scenario::new(r, ell, phi).unwrap(), &NoiseConfig::default());
        let best = limits(r, ell).unwrap().min_sensitivity;
        prop_assert!(p.delta_phi >= best * (1.0 - 1e-12));
    }
}
