//! Gaussian states described by their first and second moments.
//!
//! Phase-space vectors use the interleaved quadrature order
//! `(x_1, p_1, x_2, p_2, ..., x_k, p_k)` with `x = (a + a†)/√2`. The
//! covariance matrix `Γ` holds twice the symmetrized second moments, so the
//! vacuum has `Γ = I` and no factors of hbar appear.
//! Every matrix in this crate (beam splitters, rotations, the 8x8 thermal
//! construction) assumes this layout.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure_finite, ensure_unit_interval, Error, Result};

/// Largest tolerated `|Γ_ij - Γ_ji|`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A `k`-mode Gaussian state: mean vector of length `2k` and a symmetric,
/// positive-definite `2k x 2k` covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    modes: usize,
}

impl GaussianState {
    /// Validates and builds a state. The covariance must be symmetric to
    /// [`SYMMETRY_TOLERANCE`] and positive definite.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                what: "mean length must be a positive even number",
                expected: dim + dim % 2,
                got: dim,
            });
        }
        if covariance.nrows() != dim || covariance.ncols() != dim {
            return Err(Error::DimensionMismatch {
                what: "covariance must be square with the mean's dimension",
                expected: dim,
                got: covariance.nrows().max(covariance.ncols()),
            });
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonPhysical("non-finite moment".into()));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let asym = (covariance[(i, j)] - covariance[(j, i)]).abs();
                if asym > SYMMETRY_TOLERANCE {
                    return Err(Error::NonPhysical(format!(
                        "covariance not symmetric at ({i}, {j}): |difference| = {asym:e}"
                    )));
                }
            }
        }
        if covariance.clone().cholesky().is_none() {
            return Err(Error::NonPhysical(
                "covariance is not positive definite".into(),
            ));
        }
        Ok(Self {
            mean,
            covariance,
            modes: dim / 2,
        })
    }

    /// `k`-mode vacuum: zero mean, identity covariance.
    pub fn vacuum(modes: usize) -> Self {
        assert!(modes > 0, "vacuum needs at least one mode");
        Self {
            mean: DVector::zeros(2 * modes),
            covariance: DMatrix::identity(2 * modes, 2 * modes),
            modes,
        }
    }

    /// Product of `modes` thermal states with mean occupation `n_thermal`;
    /// each mode has covariance `(2 n_th + 1) I_2`.
    pub fn thermal(modes: usize, n_thermal: f64) -> Result<Self> {
        let n = crate::error::ensure_non_negative("n_thermal", n_thermal)?;
        let mut state = Self::vacuum(modes);
        state.covariance *= 2.0 * n + 1.0;
        Ok(state)
    }

    /// Two-mode squeezed vacuum with squeezing `r`:
    /// `[[cosh 2r I, sinh 2r Z], [sinh 2r Z, cosh 2r I]]`, `Z = diag(1, -1)`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Result<Self> {
        let r = ensure_finite("r", r)?;
        if r < 0.0 {
            return Err(Error::param("r", r, "squeezing must be non-negative"));
        }
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        #[rustfmt::skip]
        let covariance = DMatrix::from_row_slice(4, 4, &[
            c,   0.0, s,   0.0,
            0.0, c,   0.0, -s,
            s,   0.0, c,   0.0,
            0.0, -s,  0.0, c,
        ]);
        Ok(Self {
            mean: DVector::zeros(4),
            covariance,
            modes: 2,
        })
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Block-diagonal joint state `self ⊗ other`; `other`'s modes follow.
    pub fn direct_sum(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (2 * self.modes, 2 * other.modes);
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut covariance = DMatrix::zeros(a + b, a + b);
        covariance
            .view_mut((0, 0), (a, a))
            .copy_from(&self.covariance);
        covariance
            .view_mut((a, a), (b, b))
            .copy_from(&other.covariance);
        GaussianState {
            mean,
            covariance,
            modes: self.modes + other.modes,
        }
    }

    /// `M -> S M`, `Γ -> S Γ Sᵀ`.
    pub fn propagate(&self, transform: &SymplecticTransform) -> Result<GaussianState> {
        if transform.modes != self.modes {
            return Err(Error::DimensionMismatch {
                what: "transform and state mode counts differ",
                expected: self.modes,
                got: transform.modes,
            });
        }
        let s = &transform.matrix;
        let mean = s * &self.mean;
        let covariance = symmetrized(s * &self.covariance * s.transpose());
        GaussianState::new(mean, covariance)
    }

    /// Wigner function `exp(-(X-M)ᵀ Γ⁻¹ (X-M)) / (π^k sqrt(det Γ))`.
    pub fn evaluate_wigner(&self, point: &[f64]) -> Result<f64> {
        let dim = 2 * self.modes;
        if point.len() != dim {
            return Err(Error::DimensionMismatch {
                what: "phase-space point length",
                expected: dim,
                got: point.len(),
            });
        }
        let chol = self
            .covariance
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NonPhysical("covariance is singular or indefinite".into()))?;
        let delta = DVector::from_column_slice(point) - &self.mean;
        let solved = chol.solve(&delta);
        let quad = delta.dot(&solved);
        let det = chol.determinant();
        Ok((-quad).exp() / (PI.powi(self.modes as i32) * det.sqrt()))
    }

    /// Reduced state on `mode_indices` (0-based), in the given order.
    pub fn marginal(&self, mode_indices: &[usize]) -> Result<GaussianState> {
        if mode_indices.is_empty() {
            return Err(Error::InvalidModes("empty mode list".into()));
        }
        for (pos, &m) in mode_indices.iter().enumerate() {
            if m >= self.modes {
                return Err(Error::InvalidModes(format!(
                    "mode {m} out of range for a {}-mode state",
                    self.modes
                )));
            }
            if mode_indices[..pos].contains(&m) {
                return Err(Error::InvalidModes(format!("mode {m} listed twice")));
            }
        }
        let rows: Vec<usize> = mode_indices
            .iter()
            .flat_map(|&m| [2 * m, 2 * m + 1])
            .collect();
        let n = rows.len();
        let mean = DVector::from_fn(n, |i, _| self.mean[rows[i]]);
        let covariance = DMatrix::from_fn(n, n, |i, j| self.covariance[(rows[i], rows[j])]);
        Ok(GaussianState {
            mean,
            covariance,
            modes: mode_indices.len(),
        })
    }

    /// Parity `<(-1)^n>` of one mode, i.e. `P_even - P_odd`.
    ///
    /// Equals π times the single-mode marginal Wigner function at the
    /// origin: `exp(-mᵀ γ⁻¹ m) / sqrt(det γ)` over the mode's 2x2 block.
    pub fn parity_expectation(&self, mode: usize) -> Result<f64> {
        if mode >= self.modes {
            return Err(Error::InvalidModes(format!(
                "mode {mode} out of range for a {}-mode state",
                self.modes
            )));
        }
        let (i, j) = (2 * mode, 2 * mode + 1);
        let (a, b) = (self.covariance[(i, i)], self.covariance[(i, j)]);
        let (c, d) = (self.covariance[(j, i)], self.covariance[(j, j)]);
        let det = a * d - b * c;
        if !(det > 0.0 && det.is_finite()) || a <= 0.0 {
            return Err(Error::NonPhysical(format!(
                "mode {mode} covariance block has determinant {det:e}"
            )));
        }
        let (mx, mp) = (self.mean[i], self.mean[j]);
        // adjugate inverse of the 2x2 block
        let quad = (d * mx * mx - (b + c) * mx * mp + a * mp * mp) / det;
        Ok((-quad).exp() / det.sqrt())
    }

    /// Uniform loss `L` on every mode: `Γ -> (1-L) Γ + L I`, `M -> sqrt(1-L) M`.
    pub fn apply_uniform_loss(&self, loss: f64) -> Result<GaussianState> {
        let loss = ensure_unit_interval("loss", loss)?;
        let dim = 2 * self.modes;
        let covariance = &self.covariance * (1.0 - loss) + DMatrix::identity(dim, dim) * loss;
        let mean = &self.mean * (1.0 - loss).sqrt();
        GaussianState::new(mean, covariance)
    }
}

/// A linear phase-space map on `k` modes, stored as a `2k x 2k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    modes: usize,
}

impl SymplecticTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                what: "transform must be square with even dimension",
                expected: dim + dim % 2,
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonPhysical("non-finite transform entry".into()));
        }
        Ok(Self {
            matrix,
            modes: dim / 2,
        })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * modes, 2 * modes),
            modes,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `next · self`: apply `self` first, then `next`.
    pub fn then(&self, next: &SymplecticTransform) -> Result<SymplecticTransform> {
        if next.modes != self.modes {
            return Err(Error::DimensionMismatch {
                what: "composed transforms must act on the same modes",
                expected: self.modes,
                got: next.modes,
            });
        }
        Ok(SymplecticTransform {
            matrix: &next.matrix * &self.matrix,
            modes: self.modes,
        })
    }

    /// Composes `elements` in the order light meets them, giving
    /// `S_last · ... · S_first`.
    pub fn chain<'a, I>(elements: I) -> Result<SymplecticTransform>
    where
        I: IntoIterator<Item = &'a SymplecticTransform>,
    {
        let mut iter = elements.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidModes("cannot chain zero transforms".into()))?
            .clone();
        iter.try_fold(first, |acc, next| acc.then(next))
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &SymplecticTransform) -> SymplecticTransform {
        let (a, b) = (2 * self.modes, 2 * other.modes);
        let mut matrix = DMatrix::zeros(a + b, a + b);
        matrix.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        matrix.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        SymplecticTransform {
            matrix,
            modes: self.modes + other.modes,
        }
    }
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_parity_is_one_on_every_mode() {
        let vac = GaussianState::vacuum(3);
        for m in 0..3 {
            assert_eq!(vac.parity_expectation(m).unwrap(), 1.0);
        }
    }

    #[test]
    fn identity_propagation_leaves_vacuum() {
        let vac = GaussianState::vacuum(2);
        let out = vac.propagate(&SymplecticTransform::identity(2)).unwrap();
        assert_eq!(out, vac);
    }

    #[test]
    fn propagate_rejects_mode_mismatch() {
        let vac = GaussianState::vacuum(2);
        let err = vac
            .propagate(&SymplecticTransform::identity(3))
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn construction_rejects_asymmetric_and_indefinite() {
        let mut cov = DMatrix::identity(2, 2);
        cov[(0, 1)] = 1e-9;
        assert!(matches!(
            GaussianState::new(DVector::zeros(2), cov),
            Err(Error::NonPhysical(_))
        ));
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(GaussianState::new(DVector::zeros(2), cov).is_err());
        let cov = DMatrix::identity(4, 4);
        assert!(matches!(
            GaussianState::new(DVector::zeros(2), cov),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_nan() {
        let mut mean = DVector::zeros(2);
        mean[0] = f64::NAN;
        assert!(GaussianState::new(mean, DMatrix::identity(2, 2)).is_err());
        assert!(GaussianState::two_mode_squeezed_vacuum(f64::INFINITY).is_err());
        assert!(GaussianState::two_mode_squeezed_vacuum(-0.1).is_err());
    }

    #[test]
    fn single_mode_vacuum_wigner_at_origin() {
        let w = GaussianState::vacuum(1)
            .evaluate_wigner(&[0.0, 0.0])
            .unwrap();
        assert!(close(w, 1.0 / PI, 1e-15));
    }

    #[test]
    fn tmsv_wigner_at_origin_is_inverse_pi_squared() {
        for r in [0.0, 0.3, 1.0, 1.5] {
            let s = GaussianState::two_mode_squeezed_vacuum(r).unwrap();
            let w = s.evaluate_wigner(&[0.0; 4]).unwrap();
            assert!(close(w, 1.0 / (PI * PI), 1e-12), "r={r}: {w}");
        }
    }

    /// `exp[2 σ (p1 p2 - x1 x2) sinh 2r - (x1² + x2² + p1² + p2²) cosh 2r] / π²`
    fn tmsv_wigner_explicit(r: f64, sigma: f64, x: [f64; 4]) -> f64 {
        let [x1, p1, x2, p2] = x;
        (2.0 * sigma * (p1 * p2 - x1 * x2) * (2.0 * r).sinh()
            - (x1 * x1 + x2 * x2 + p1 * p1 + p2 * p2) * (2.0 * r).cosh())
        .exp()
            / (PI * PI)
    }

    #[test]
    fn tmsv_wigner_matches_explicit_exponent() {
        let r = 0.3;
        let x = [0.1, 0.2, -0.1, 0.05];
        let s = GaussianState::two_mode_squeezed_vacuum(r).unwrap();
        let w = s.evaluate_wigner(&x).unwrap();
        // +sinh(2r) Z off-diagonal blocks correlate x1,x2 and anti-correlate p1,p2
        let explicit = tmsv_wigner_explicit(r, -1.0, x);
        assert!(close(w, explicit, 1e-12), "{w} vs {explicit}");

        // the opposite-sign exponent belongs to the -sinh(2r) Z covariance
        let (c, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        #[rustfmt::skip]
        let flipped = DMatrix::from_row_slice(4, 4, &[
            c,   0.0, -sh, 0.0,
            0.0, c,   0.0, sh,
            -sh, 0.0, c,   0.0,
            0.0, sh,  0.0, c,
        ]);
        let t = GaussianState::new(DVector::zeros(4), flipped).unwrap();
        let explicit = tmsv_wigner_explicit(r, 1.0, x);
        assert!(close(t.evaluate_wigner(&x).unwrap(), explicit, 1e-12));
    }

    #[test]
    fn wigner_rejects_wrong_point_length() {
        let s = GaussianState::vacuum(2);
        assert!(s.evaluate_wigner(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn single_mode_wigner_integrates_to_one() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 0.8]);
        let mean = DVector::from_column_slice(&[0.3, -0.2]);
        let s = GaussianState::new(mean, cov).unwrap();
        let (lo, hi, n) = (-8.0, 8.0, 400);
        let h = (hi - lo) / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = lo + (i as f64 + 0.5) * h;
                let p = lo + (j as f64 + 0.5) * h;
                total += s.evaluate_wigner(&[x, p]).unwrap() * h * h;
            }
        }
        assert!(close(total, 1.0, 1e-3), "{total}");
    }

    #[test]
    fn marginal_selects_principal_block() {
        let s = GaussianState::two_mode_squeezed_vacuum(0.7).unwrap();
        let b = s.marginal(&[1]).unwrap();
        assert_eq!(b.modes(), 1);
        let c = (1.4f64).cosh();
        assert!(close(b.covariance()[(0, 0)], c, 1e-15));
        assert!(close(b.covariance()[(1, 1)], c, 1e-15));
        assert_eq!(b.covariance()[(0, 1)], 0.0);

        let vac_b = GaussianState::vacuum(2).marginal(&[1]).unwrap();
        assert_eq!(vac_b, GaussianState::vacuum(1));
    }

    #[test]
    fn marginal_of_marginal_is_direct_marginal() {
        let s = GaussianState::two_mode_squeezed_vacuum(0.4)
            .unwrap()
            .direct_sum(&GaussianState::thermal(1, 0.3).unwrap());
        let via = s.marginal(&[0, 1]).unwrap().marginal(&[1]).unwrap();
        assert_eq!(via, s.marginal(&[1]).unwrap());
    }

    #[test]
    fn marginal_rejects_bad_indices() {
        let s = GaussianState::vacuum(2);
        assert!(matches!(s.marginal(&[]), Err(Error::InvalidModes(_))));
        assert!(matches!(s.marginal(&[2]), Err(Error::InvalidModes(_))));
        assert!(matches!(s.marginal(&[1, 1]), Err(Error::InvalidModes(_))));
    }

    #[test]
    fn parity_uses_mean_for_displaced_states() {
        // coherent state: |α|² = (x² + p²)/2, parity e^{-2|α|²}
        let mean = DVector::from_column_slice(&[1.2, -0.4]);
        let s = GaussianState::new(mean, DMatrix::identity(2, 2)).unwrap();
        let alpha_sq = (1.2f64 * 1.2 + 0.4 * 0.4) / 2.0;
        assert!(close(
            s.parity_expectation(0).unwrap(),
            (-2.0 * alpha_sq).exp(),
            1e-15
        ));
    }

    #[test]
    fn parity_rejects_bad_mode() {
        assert!(GaussianState::vacuum(1).parity_expectation(1).is_err());
    }

    #[test]
    fn thermal_parity_is_inverse_of_variance() {
        let s = GaussianState::thermal(1, 0.5).unwrap();
        // 1/(2n+1)
        assert!(close(s.parity_expectation(0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn uniform_loss_endpoints() {
        let s = GaussianState::two_mode_squeezed_vacuum(0.9).unwrap();
        assert_eq!(s.apply_uniform_loss(0.0).unwrap(), s);
        let gone = s.apply_uniform_loss(1.0).unwrap();
        assert_eq!(gone, GaussianState::vacuum(2));
        assert!(s.apply_uniform_loss(1.5).is_err());
        assert!(s.apply_uniform_loss(-0.01).is_err());
        assert!(s.apply_uniform_loss(f64::NAN).is_err());
    }

    #[test]
    fn chain_orders_last_on_the_left() {
        let a =
            SymplecticTransform::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).unwrap();
        let b =
            SymplecticTransform::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 2.0, 1.0])).unwrap();
        let chained = SymplecticTransform::chain([&a, &b]).unwrap();
        assert_eq!(chained.matrix(), &(b.matrix() * a.matrix()));
    }
}
