//! The Gaussian noise channel.
//!
//! Random displacements with a Gaussian kernel `G` update a correlation
//! matrix as `Gamma(A) = A - J G^{-1} J`; for the scalar kernel `G = g I`
//! this adds `(1/g) I`, i.e. `1/(2g)` thermal photons per mode. The
//! one-mode parametric laws and the chi-monotonicity failure boundary live
//! here as well.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mat;
use crate::states::{CorrelationMatrix, OneModeParams};

/// Gaussian noise kernel: either the scalar shortcut `G = g I` or a full
/// symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub enum NoiseKernel {
    Scalar { modes: usize, g: f64 },
    Full(DMatrix<f64>),
}

impl NoiseKernel {
    /// Scalar kernel `G = g I`; `g = +inf` is the zero-noise limit.
    pub fn scalar(modes: usize, g: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParams("mode count must be >= 1".into()));
        }
        if g.is_nan() || g <= 0.0 {
            return Err(Error::InvalidParams(format!("noise parameter g = {g} must be > 0")));
        }
        Ok(NoiseKernel::Scalar { modes, g })
    }

    /// Full kernel; must be symmetric positive definite.
    pub fn full(g: DMatrix<f64>) -> Result<Self> {
        mat::mode_count(&g)?;
        let scale = mat::max_abs(&g).max(1.0);
        if mat::max_asymmetry(&g) > 1e-9 * scale {
            return Err(Error::NotSymmetric {
                max_asym: mat::max_asymmetry(&g),
            });
        }
        if nalgebra::Cholesky::new(mat::symmetrize(&g)).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(NoiseKernel::Full(mat::symmetrize(&g)))
    }

    pub fn modes(&self) -> usize {
        match self {
            NoiseKernel::Scalar { modes, .. } => *modes,
            NoiseKernel::Full(g) => g.nrows() / 2,
        }
    }

    /// The positive matrix `-J G^{-1} J` added to the correlation matrix.
    pub fn added_term(&self) -> DMatrix<f64> {
        match self {
            NoiseKernel::Scalar { modes, g } => {
                let inv_g = if g.is_infinite() { 0.0 } else { 1.0 / g };
                DMatrix::identity(2 * modes, 2 * modes) * inv_g
            }
            NoiseKernel::Full(g) => {
                let j = mat::j_matrix(g.nrows() / 2);
                let inv = g
                    .clone()
                    .try_inverse()
                    .expect("kernel is positive definite by construction");
                mat::symmetrize(&(-(&j * inv * &j)))
            }
        }
    }

    /// Whether the kernel has the paired-diagonal structure (an orthogonal
    /// symplectic congruence of `diag(D, D)`), equivalently `J G = G J`.
    /// Arbitrary positive definite kernels are legal; this structural check
    /// runs only on request.
    pub fn has_paired_structure(&self, tol: f64) -> bool {
        match self {
            NoiseKernel::Scalar { .. } => true,
            NoiseKernel::Full(g) => {
                let j = mat::j_matrix(g.nrows() / 2);
                let comm = &j * g - g * &j;
                mat::max_abs(&comm) <= tol
            }
        }
    }
}

/// `Gamma(A) = A - J G^{-1} J`.
pub fn apply_noise(state: &CorrelationMatrix, kernel: &NoiseKernel) -> Result<CorrelationMatrix> {
    if state.modes() != kernel.modes() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: 2 * kernel.modes(),
        });
    }
    CorrelationMatrix::new(state.matrix() + kernel.added_term())
}

/// One-mode parametric law for the scalar kernel:
/// `Gamma(d) = sqrt((1/g + d m^2)(1/g + d/m^2))`,
/// `Gamma(m)^2 = sqrt((1/g + d m^2)/(1/g + d/m^2))`, theta unchanged.
pub fn noise_one_mode(p: &OneModeParams, g: f64) -> Result<OneModeParams> {
    if g.is_nan() || g <= 0.0 {
        return Err(Error::InvalidParams(format!("noise parameter g = {g} must be > 0")));
    }
    let inv_g = if g.is_infinite() { 0.0 } else { 1.0 / g };
    let x1 = inv_g + p.d() * p.m() * p.m();
    let x2 = inv_g + p.d() / (p.m() * p.m());
    let gamma_d = (x1 * x2).sqrt();
    let gamma_m = (x1 / x2).powf(0.25);
    OneModeParams::new(gamma_d.max(1.0), gamma_m.max(1.0), p.theta())
}

/// True when the noisy state is classical: `1/g + d/m^2 > 1`.
pub fn classicality_onset(p: &OneModeParams, g: f64) -> bool {
    let inv_g = if g.is_infinite() { 0.0 } else { 1.0 / g };
    inv_g + p.d() / (p.m() * p.m()) > 1.0
}

/// Critical inverse noise `1/g* = m^2/d - d/m^2` below which the
/// chi-monotonicity inequality holds; `None` for classical input.
pub fn chi_monotonicity_threshold(p: &OneModeParams) -> Option<f64> {
    if p.is_classical() {
        return None;
    }
    Some(p.m() * p.m() / p.d() - p.d() / (p.m() * p.m()))
}

/// Both sides of the chi-monotonicity inequality
/// `Gamma(m) sqrt(Gamma(d)) / (m sqrt(d)) >= (Gamma(d) + Gamma(m)^2) / (d + m^2)`,
/// evaluated explicitly at noise `g`.
pub fn chi_inequality_sides(p: &OneModeParams, g: f64) -> Result<(f64, f64)> {
    let noisy = noise_one_mode(p, g)?;
    let lhs = noisy.m() * noisy.d().sqrt() / (p.m() * p.d().sqrt());
    let rhs = (noisy.d() + noisy.m() * noisy.m()) / (p.d() + p.m() * p.m());
    Ok((lhs, rhs))
}

/// Recovers the inverse noise strength `1/g` from `(d, m)` and the noisy
/// thermal parameter `Gamma(d)`, via the positive root of
/// `(1/g)^2 + (1/g) d (m^2 + 1/m^2) + d^2 - Gamma(d)^2 = 0`:
/// `1/g = d [ -(m^2 + 1/m^2) + sqrt((m^2 - 1/m^2)^2 + 4 (Gamma(d)/d)^2) ] / 2`.
pub fn noise_strength_from_growth(p: &OneModeParams, gamma_d: f64) -> Result<f64> {
    if gamma_d < p.d() {
        return Err(Error::InvalidParams(format!(
            "Gamma(d) = {gamma_d} cannot be below d = {}",
            p.d()
        )));
    }
    let m2 = p.m() * p.m();
    let tau = m2 + 1.0 / m2;
    let diff = m2 - 1.0 / m2;
    let disc = diff * diff + 4.0 * (gamma_d / p.d()).powi(2);
    Ok((p.d() * (-tau + disc.sqrt()) / 2.0).max(0.0))
}
