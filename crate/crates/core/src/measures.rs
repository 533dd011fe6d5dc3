//! Distance-type quantities between Gaussian states and the derived
//! nonclassicality measures.
//!
//! `fidelity` is the Uhlmann transition probability
//! `[Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2`; `holevo_overlap` is the
//! cheaper `Tr sqrt(rho1) sqrt(rho2)`. Both bound the trace distance via
//! [`delta_bounds`]. The one-mode measures `chi` and `phi` gauge the
//! distance of a state to the classical set through the closed-form branch
//! expressions; the [`crate::optimizer`] module probes the corresponding
//! suprema numerically.

use crate::error::{Error, Result};
use crate::sqrt_map::{self, det_phi_of_spectrum, phi_factor};
use crate::states::{CorrelationMatrix, GaussianOperatorCF, OneModeParams};
use crate::tol;

fn clamp_unit(value: f64, what: &str) -> Result<f64> {
    if !(value.is_finite()) || value <= 0.0 {
        return Err(Error::NumericalFailure(format!(
            "{what} produced a non-positive value {value}"
        )));
    }
    if value > 1.0 + 1e-6 {
        return Err(Error::NumericalFailure(format!(
            "{what} exceeded 1 by {:.3e}",
            value - 1.0
        )));
    }
    Ok(value.min(1.0))
}

fn check_same_modes(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<()> {
    if a1.modes() != a2.modes() {
        return Err(Error::DimensionMismatch {
            expected: a1.dim(),
            got: a2.dim(),
        });
    }
    Ok(())
}

/// Holevo overlap
/// `Tr sqrt(rho1) sqrt(rho2) =
///  sqrt( sqrt(det phi(A1) det phi(A2)) / det((phi(A1)+phi(A2))/2) )`.
pub fn holevo_overlap(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<f64> {
    check_same_modes(a1, a2)?;
    let phi1 = sqrt_map::phi_of(a1)?;
    let phi2 = sqrt_map::phi_of(a2)?;
    let det1 = sqrt_map::det_phi(a1)?;
    let det2 = sqrt_map::det_phi(a2)?;
    let mid = (&phi1 + &phi2) * 0.5;
    let value = ((det1 * det2).sqrt() / mid.determinant()).sqrt();
    clamp_unit(value, "holevo_overlap")
}

/// Shape factor
/// `2 + sin^2(dt) (m1^2 m2^2 + 1/(m1^2 m2^2)) + cos^2(dt) ((m1/m2)^2 + (m2/m1)^2)`.
fn squeeze_shape(delta_theta: f64, m1: f64, m2: f64) -> f64 {
    let (s, c) = delta_theta.sin_cos();
    let prod = (m1 * m2).powi(2);
    let ratio = (m1 / m2).powi(2);
    2.0 + s * s * (prod + 1.0 / prod) + c * c * (ratio + 1.0 / ratio)
}

/// One-mode closed form of the Holevo overlap: `2 / sqrt(H)` with
/// `H = (phi(d1) - phi(d2))^2 / (phi(d1) phi(d2)) + F(dtheta, m1, m2)`.
pub fn overlap_one_mode(p1: &OneModeParams, p2: &OneModeParams) -> f64 {
    let f1 = phi_factor(p1.d());
    let f2 = phi_factor(p2.d());
    let h = (f1 - f2).powi(2) / (f1 * f2) + squeeze_shape(p1.theta() - p2.theta(), p1.m(), p2.m());
    (2.0 / h.sqrt()).min(1.0)
}

/// One-mode nonclassicality measure based on the overlap: 1 on the
/// classical branch (`d >= m^2`), otherwise `2 / (sqrt(d)/m + m/sqrt(d))`.
pub fn chi_one_mode(p: &OneModeParams) -> f64 {
    if p.is_classical() {
        return 1.0;
    }
    let root_d = p.d().sqrt();
    2.0 / (root_d / p.m() + p.m() / root_d)
}

/// Overlap-based measure of a pure multimode squeezed state with diagonal
/// squeezes `m_k`: `1 / prod_k ((m_k + 1/m_k) / 2)`.
pub fn chi_pure_multimode(squeezes: &[f64]) -> Result<f64> {
    if squeezes.is_empty() {
        return Err(Error::InvalidParams("empty squeeze list".into()));
    }
    let mut prod = 1.0;
    for &m in squeezes {
        if m <= 0.0 || !m.is_finite() {
            return Err(Error::InvalidParams(format!("squeeze {m} must be > 0")));
        }
        prod *= 0.5 * (m + 1.0 / m);
    }
    Ok(1.0 / prod)
}

/// Uhlmann fidelity of two Gaussian states, general multimode pipeline.
///
/// Composes characteristic functions: `T = CF(sqrt(rho1) rho2 sqrt(rho1))`
/// carries scale `sqrt(L)` with `L = det((A1+A2)/2)^{-1}` and a complex
/// symmetric form whose real part `O` is a valid correlation matrix; then
/// `F = sqrt(L * det phi(O))` with `det phi(O)` evaluated spectrally.
pub fn fidelity(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<f64> {
    check_same_modes(a1, a2)?;
    a2.require_valid(tol::VALIDITY_SLACK)?;
    let s1 = sqrt_map::sqrt_cf(a1)?;
    let t = s1.product(&GaussianOperatorCF::from_state(a2))?.product(&s1)?;

    let scale = t.trace();
    if scale.im.abs() > tol::FIDELITY_IMAG_RESIDUE * scale.re.abs().max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "fidelity scale imaginary residue {:.3e}",
            scale.im
        )));
    }
    let o = CorrelationMatrix::new(t.real_form(tol::FIDELITY_IMAG_RESIDUE)?)?;
    let spec = o.require_valid(1e-6)?;
    let value = scale.re * det_phi_of_spectrum(&spec).sqrt();
    clamp_unit(value, "fidelity")
}

/// One-mode closed form `F = 2 / (sqrt(det(A1+A2) + P) - sqrt(P))` with
/// `P = (det A1 - 1)(det A2 - 1)`.
pub fn fidelity_one_mode(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<f64> {
    check_same_modes(a1, a2)?;
    if a1.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a1.dim(),
        });
    }
    a1.require_valid(tol::VALIDITY_SLACK)?;
    a2.require_valid(tol::VALIDITY_SLACK)?;
    let p = (a1.matrix().determinant() - 1.0).max(0.0) * (a2.matrix().determinant() - 1.0).max(0.0);
    let det_sum = (a1.matrix() + a2.matrix()).determinant();
    let value = 2.0 / ((det_sum + p).sqrt() - p.sqrt());
    clamp_unit(value, "fidelity_one_mode")
}

/// Parametrized one-mode fidelity,
/// `2 / (sqrt(d1^2 d2^2 + 1 + d1 d2 (F - 2)) - sqrt((d1^2-1)(d2^2-1)))`.
pub fn fidelity_one_mode_params(p1: &OneModeParams, p2: &OneModeParams) -> f64 {
    let shape = squeeze_shape(p1.theta() - p2.theta(), p1.m(), p2.m());
    let (d1, d2) = (p1.d(), p2.d());
    let under = d1 * d1 * d2 * d2 + 1.0 + d1 * d2 * (shape - 2.0);
    let cross = ((d1 * d1 - 1.0) * (d2 * d2 - 1.0)).max(0.0);
    (2.0 / (under.sqrt() - cross.sqrt())).min(1.0)
}

/// One-mode fidelity-based nonclassicality measure: 1 on the classical
/// branch, otherwise
/// `2 / (sqrt((d^2-1)^2 + d^2 (sqrt(d)/m + m/sqrt(d))^2) - (d^2-1))`.
pub fn phi_measure_one_mode(p: &OneModeParams) -> f64 {
    if p.is_classical() {
        return 1.0;
    }
    let t = p.d() * p.d() - 1.0;
    let root_d = p.d().sqrt();
    let s = root_d / p.m() + p.m() / root_d;
    // hypot keeps the pure-state branch (t = 0) bit-identical with chi
    2.0 / (f64::hypot(t, p.d() * s) - t)
}

/// Which inequality chain a bound pair comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Fidelity,
    Overlap,
}

/// Trace-norm bounds from a fidelity value, `2(1 - sqrt(F)) <= ||.||_1 <=
/// 2 sqrt(1 - F)`, or from an overlap value, `2(1 - h) <= ||.||_1 <=
/// 2 sqrt(1 - h^2)`.
pub fn delta_bounds(value: f64, kind: BoundKind) -> Result<(f64, f64)> {
    if !(value > 0.0 && value <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "bound input {value} must lie in (0, 1]"
        )));
    }
    Ok(match kind {
        BoundKind::Fidelity => (
            2.0 * (1.0 - value.sqrt()),
            2.0 * (1.0 - value).max(0.0).sqrt(),
        ),
        BoundKind::Overlap => (
            2.0 * (1.0 - value),
            2.0 * (1.0 - value * value).max(0.0).sqrt(),
        ),
    })
}

/// Bundled measure values with both trace-distance bound pairs.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub fidelity: Option<f64>,
    pub holevo_overlap: Option<f64>,
    pub chi: Option<f64>,
    pub phi_measure: Option<f64>,
    /// Bounds from the fidelity chain (pairwise fidelity, or the
    /// fidelity-based measure for a single state).
    pub delta_bounds_fidelity: (f64, f64),
    /// Bounds from the overlap chain.
    pub delta_bounds_overlap: (f64, f64),
}

/// Pairwise report: fidelity and overlap of two states plus both bound
/// pairs on their trace distance.
pub fn report_pair(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<MeasureReport> {
    let f = fidelity(a1, a2)?;
    let h = holevo_overlap(a1, a2)?;
    Ok(MeasureReport {
        fidelity: Some(f),
        holevo_overlap: Some(h),
        chi: None,
        phi_measure: None,
        delta_bounds_fidelity: delta_bounds(f, BoundKind::Fidelity)?,
        delta_bounds_overlap: delta_bounds(h, BoundKind::Overlap)?,
    })
}

/// Single-state report: the sup-based measures of a one-mode state plus the
/// bound pairs they induce on the distance to the classical set.
pub fn report_single(p: &OneModeParams) -> Result<MeasureReport> {
    let chi = chi_one_mode(p);
    let phi = phi_measure_one_mode(p);
    Ok(MeasureReport {
        fidelity: None,
        holevo_overlap: None,
        chi: Some(chi),
        phi_measure: Some(phi),
        delta_bounds_fidelity: delta_bounds(phi, BoundKind::Fidelity)?,
        delta_bounds_overlap: delta_bounds(chi, BoundKind::Overlap)?,
    })
}
