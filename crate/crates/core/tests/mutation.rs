//! A deliberately wrong rotation block must be caught by `validate`.

use oam_parity::interferometer::ElementSet;
use oam_parity::validation::{run_with, Tolerances};

fn flipped_sign(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, s], [s, c]]
}

fn failing(elements: &ElementSet) -> Vec<&'static str> {
    run_with(elements, &Tolerances::default())
        .into_iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect()
}

#[test]
fn sign_error_in_rotation_is_detected() {
    let failed = failing(&ElementSet {
        rotation: flipped_sign,
    });
    for name in [
        "matrix_ideal",
        "matrix_loss",
        "matrix_thermal",
        "oracle_vs_matrix",
    ] {
        assert!(
            failed.contains(&name),
            "{name} passed with a broken rotation: {failed:?}"
        );
    }
}

#[test]
fn correct_rotation_passes_the_matrix_checks() {
    let failed = failing(&ElementSet::default());
    for name in [
        "matrix_ideal",
        "matrix_loss",
        "matrix_thermal",
        "oracle_vs_matrix",
    ] {
        assert!(!failed.contains(&name), "{name} failed: {failed:?}");
    }
}
