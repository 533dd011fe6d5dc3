//! The square-root map for Gaussian density operators.
//!
//! If `CF_u(rho) = exp(-u^T A u / 4)` then `CF_u(sqrt(rho))` is again a
//! Gaussian, `K exp(-u^T phi(A) u / 4)`, where `phi(A)` solves the fixed
//! point `phi(A) - J phi(A)^{-1} J = 2 A` and `K = det(phi(A))^{1/4}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mat::{self, C64};
use crate::states::{CorrelationMatrix, GaussianOperatorCF};
use crate::symplectic;
use crate::tol;

/// Scalar spectral function `d -> d + sqrt(d^2 - 1)`, clamped to `d` inside
/// the near-pure band so round-off below 1 never puts a negative number
/// under the radical.
pub(crate) fn phi_factor(d: f64) -> f64 {
    if d - 1.0 <= tol::PURE_CLAMP {
        d.max(1.0)
    } else {
        d + (d * d - 1.0).sqrt()
    }
}

fn checked_spectrum(spec: &[f64]) -> Result<()> {
    for &d in spec {
        if d < 1.0 - tol::VALIDITY_SLACK {
            return Err(Error::InvalidState { min_eig: d });
        }
    }
    Ok(())
}

/// `phi(A) = S^T (D + sqrt(D^2 - I)) S` through the Williamson route.
///
/// Satisfies `phi(A) - J phi(A)^{-1} J = 2 A`; for pure states `phi(A) = A`.
pub fn phi_of(state: &CorrelationMatrix) -> Result<DMatrix<f64>> {
    let w = state.williamson(tol::PREDICATE)?;
    checked_spectrum(w.spectrum())?;
    let lifted: Vec<f64> = w.spectrum().iter().map(|&d| phi_factor(d)).collect();
    let s = w.symplectic_matrix();
    let phi = s.transpose() * symplectic::paired_diag(&lifted) * s;
    Ok(mat::symmetrize(&phi))
}

/// `det phi(A) = prod_k (d_k + sqrt(d_k^2 - 1))^2`, evaluated from the
/// symplectic spectrum rather than the matrix determinant.
pub fn det_phi(state: &CorrelationMatrix) -> Result<f64> {
    let spec = state.symplectic_spectrum()?;
    checked_spectrum(&spec)?;
    Ok(det_phi_of_spectrum(&spec))
}

pub(crate) fn det_phi_of_spectrum(spec: &[f64]) -> f64 {
    spec.iter().map(|&d| phi_factor(d).powi(2)).product()
}

/// CF of `sqrt(rho)`: scale `det(phi(A))^{1/4}`, form `phi(A)`.
pub fn sqrt_cf(state: &CorrelationMatrix) -> Result<GaussianOperatorCF> {
    let w = state.williamson(tol::PREDICATE)?;
    checked_spectrum(w.spectrum())?;
    let lifted: Vec<f64> = w.spectrum().iter().map(|&d| phi_factor(d)).collect();
    let s = w.symplectic_matrix();
    let phi = mat::symmetrize(&(s.transpose() * symplectic::paired_diag(&lifted) * s));
    let det: f64 = lifted.iter().map(|&l| l * l).product();
    Ok(GaussianOperatorCF::from_parts(
        state.modes(),
        C64::new(det.powf(0.25), 0.0),
        mat::to_complex(&phi),
    ))
}

/// Closed-form route `phi(A) = A (I + sqrt(I + (JA)^{-2}))`, with the
/// (non-symmetric) matrix square root taken by a Denman-Beavers iteration.
/// Cross-check only: requires a strictly mixed state, since `I + (JA)^{-2}`
/// becomes singular on pure modes.
pub fn phi_closed_form(state: &CorrelationMatrix) -> Result<DMatrix<f64>> {
    let spec = state.require_valid(tol::VALIDITY_SLACK)?;
    let min = spec.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < 1.0 + 1e-6 {
        return Err(Error::NumericalFailure(
            "closed-form phi route needs a strictly mixed state".into(),
        ));
    }
    let a = state.matrix();
    let j = mat::j_matrix(state.modes());
    let ja = &j * a;
    let ja_inv = ja
        .clone()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let m = DMatrix::<f64>::identity(a.nrows(), a.ncols()) + &ja_inv * &ja_inv;
    let root = denman_beavers_sqrt(&m)?;
    Ok(mat::symmetrize(
        &(a * (DMatrix::<f64>::identity(a.nrows(), a.ncols()) + root)),
    ))
}

fn denman_beavers_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let dim = m.nrows();
    let id = DMatrix::<f64>::identity(dim, dim);
    let mut y = m.clone();
    let mut z = id.clone();
    for _ in 0..100 {
        let y_inv = y
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("Denman-Beavers iterate singular".into()))?;
        let z_inv = z
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("Denman-Beavers iterate singular".into()))?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = mat::max_abs_diff(&y_next, &y);
        y = y_next;
        z = z_next;
        if delta < 1e-14 * mat::max_abs(&y).max(1.0) {
            let residual = mat::max_abs_diff(&(&y * &y), m);
            if residual > 1e-10 * mat::max_abs(m).max(1.0) {
                return Err(Error::NumericalFailure(format!(
                    "matrix square root residual {residual:.3e}"
                )));
            }
            return Ok(y);
        }
    }
    Err(Error::NumericalFailure(
        "Denman-Beavers iteration did not converge".into(),
    ))
}
