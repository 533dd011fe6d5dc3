//! Gaussian states as correlation matrices.
//!
//! A zero-mean Gaussian state is fixed by the real symmetric matrix `A` in
//! `CF_u(rho) = exp(-u^T A u / 4)`; the vacuum is `A = I` and a state is
//! physical exactly when every symplectic eigenvalue is >= 1.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mat::{self, C64};
use crate::symplectic::{self, WilliamsonDecomposition};
use crate::tol;

/// Correlation matrix of a zero-mean Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    a: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Wraps a 2n x 2n symmetric matrix (symmetrized exactly after a
    /// tolerance check). Positive definiteness and state validity are left
    /// to [`classify`] and the individual operations.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        let n = mat::mode_count(&a)?;
        let scale = mat::max_abs(&a).max(1.0);
        let asym = mat::max_asymmetry(&a);
        if asym > 1e-9 * scale {
            return Err(Error::NotSymmetric { max_asym: asym });
        }
        Ok(Self {
            n,
            a: mat::symmetrize(&a),
        })
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            n,
            a: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Block-diagonal composition of two states (tensor product).
    pub fn direct_sum(&self, other: &CorrelationMatrix) -> CorrelationMatrix {
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        // interleave in (p.., q..) ordering: p-block then q-block per factor
        for i in 0..n1 {
            for j in 0..n1 {
                a[(i, j)] = self.a[(i, j)];
                a[(i, n + j)] = self.a[(i, n1 + j)];
                a[(n + i, j)] = self.a[(n1 + i, j)];
                a[(n + i, n + j)] = self.a[(n1 + i, n1 + j)];
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                a[(n1 + i, n1 + j)] = other.a[(i, j)];
                a[(n1 + i, n + n1 + j)] = other.a[(i, n2 + j)];
                a[(n + n1 + i, n1 + j)] = other.a[(n2 + i, j)];
                a[(n + n1 + i, n + n1 + j)] = other.a[(n2 + i, n2 + j)];
            }
        }
        CorrelationMatrix { n, a }
    }

    pub fn symplectic_spectrum(&self) -> Result<Vec<f64>> {
        symplectic::spectrum(&self.a)
    }

    pub fn williamson(&self, tol: f64) -> Result<WilliamsonDecomposition> {
        symplectic::williamson(&self.a, tol)
    }

    /// True when every symplectic eigenvalue is >= 1 - tol.
    pub fn is_valid_state(&self, tol: f64) -> Result<bool> {
        match self.symplectic_spectrum() {
            Ok(spec) => Ok(spec.iter().all(|&d| d >= 1.0 - tol)),
            Err(Error::NotPositiveDefinite) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub(crate) fn require_valid(&self, tol: f64) -> Result<Vec<f64>> {
        let spec = self.symplectic_spectrum()?;
        let min = spec.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < 1.0 - tol {
            return Err(Error::InvalidState { min_eig: min });
        }
        Ok(spec)
    }
}

/// One-mode state parameters: thermal `d = 2 n_bar + 1 >= 1`, squeeze
/// `m = exp(r) >= 1` (canonical branch), rotation `theta` in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneModeParams {
    d: f64,
    m: f64,
    theta: f64,
}

impl OneModeParams {
    pub fn new(d: f64, m: f64, theta: f64) -> Result<Self> {
        if d.is_nan() || d < 1.0 {
            return Err(Error::InvalidParams(format!("thermal parameter d = {d} must be >= 1")));
        }
        if m.is_nan() || m < 1.0 {
            return Err(Error::InvalidParams(format!("squeeze parameter m = {m} must be >= 1")));
        }
        let mut theta = theta.rem_euclid(std::f64::consts::PI);
        if theta >= std::f64::consts::PI {
            theta = 0.0; // rem_euclid can land exactly on pi for tiny negatives
        }
        Ok(Self { d, m, theta })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Mean thermal photon number `(d - 1) / 2`.
    pub fn n_bar(&self) -> f64 {
        (self.d - 1.0) * 0.5
    }

    /// Nonclassical exactly when `d < m^2`.
    pub fn is_classical(&self) -> bool {
        self.d >= self.m * self.m - tol::PREDICATE
    }

    pub fn to_cov(&self) -> CorrelationMatrix {
        params_to_cov(self)
    }
}

/// Assembles `A = R(theta)^T diag(d m^2, d / m^2) R(theta)`.
pub fn params_to_cov(p: &OneModeParams) -> CorrelationMatrix {
    let r = mat::rotation2(p.theta);
    let diag = DMatrix::from_row_slice(2, 2, &[p.d * p.m * p.m, 0.0, 0.0, p.d / (p.m * p.m)]);
    let a = r.transpose() * diag * r;
    CorrelationMatrix {
        n: 1,
        a: mat::symmetrize(&a),
    }
}

/// Recovers `(d, m, theta)` from a valid one-mode state: `d = sqrt(det A)`,
/// `m^2 + 1/m^2 = Tr A / sqrt(det A)` on the `m >= 1` branch, and `theta`
/// from the eigenvector of the larger eigenvalue, reduced to `[0, pi)`.
pub fn cov_to_params(state: &CorrelationMatrix) -> Result<OneModeParams> {
    if state.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.dim(),
        });
    }
    state.require_valid(tol::VALIDITY_SLACK)?;
    let a = state.matrix();
    let det = a.determinant();
    let d = det.sqrt().max(1.0);
    let tau = (a.trace() / d).max(2.0);
    // m^2 solves x + 1/x = tau with x >= 1
    let m2 = 0.5 * (tau + (tau * tau - 4.0).max(0.0).sqrt());
    let m = m2.sqrt().max(1.0);

    let theta = if m2 - 1.0 < 1e-12 {
        0.0 // isotropic: rotation unobservable
    } else {
        let eig = a.clone().symmetric_eigen();
        let (big, _small) = if eig.eigenvalues[0] >= eig.eigenvalues[1] {
            (0, 1)
        } else {
            (1, 0)
        };
        let v = eig.eigenvectors.column(big);
        let mut t = v[1].atan2(v[0]);
        t = t.rem_euclid(std::f64::consts::PI);
        if std::f64::consts::PI - t < 1e-12 {
            t = 0.0;
        }
        t
    };
    OneModeParams::new(d, m, theta)
}

/// Evaluates the state's characteristic function `exp(-u^T A u / 4)`.
pub fn cf_eval(state: &CorrelationMatrix, u: &DVector<f64>) -> Result<f64> {
    if u.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: u.len(),
        });
    }
    let q = (u.transpose() * state.matrix() * u)[(0, 0)];
    Ok((-0.25 * q).exp())
}

/// Classification of a correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// Some symplectic eigenvalue below 1: not a quantum state.
    Invalid,
    PureNonclassical,
    PureCoherent,
    MixedClassical,
    MixedNonclassical,
}

impl StateClass {
    pub fn is_classical(&self) -> bool {
        matches!(self, StateClass::PureCoherent | StateClass::MixedClassical)
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, StateClass::PureCoherent | StateClass::PureNonclassical)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StateClass::Invalid => "Invalid",
            StateClass::PureNonclassical => "PureNonclassical",
            StateClass::PureCoherent => "PureCoherent",
            StateClass::MixedClassical => "MixedClassical",
            StateClass::MixedNonclassical => "MixedNonclassical",
        }
    }
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies a state: invalid below the symplectic-eigenvalue threshold,
/// pure iff `A = -J A^{-1} J`, classical iff `A - I` is positive
/// semidefinite (boundary included).
pub fn classify(state: &CorrelationMatrix, tol: f64) -> StateClass {
    let a = state.matrix();
    let spec = match state.symplectic_spectrum() {
        Ok(spec) => spec,
        Err(_) => return StateClass::Invalid,
    };
    if spec.iter().any(|&d| d < 1.0 - tol) {
        return StateClass::Invalid;
    }

    let j = mat::j_matrix(state.modes());
    let pure = match a.clone().try_inverse() {
        Some(inv) => {
            let residual = a + &j * inv * &j;
            mat::max_abs(&residual) <= tol
        }
        None => false,
    };

    let shifted = a - DMatrix::<f64>::identity(state.dim(), state.dim());
    let min_eig = shifted
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let classical = min_eig >= -tol;

    match (pure, classical) {
        (true, true) => StateClass::PureCoherent,
        (true, false) => StateClass::PureNonclassical,
        (false, true) => StateClass::MixedClassical,
        (false, false) => StateClass::MixedNonclassical,
    }
}

/// A (generally non-normalized) Gaussian operator through its characteristic
/// function `CF_u = scale * exp(-u^T form u / 4)`. Density operators carry
/// `scale = 1` and a real form; products of operators acquire complex
/// symmetric forms whose imaginary part encodes the operator ordering.
#[derive(Debug, Clone)]
pub struct GaussianOperatorCF {
    n: usize,
    scale: C64,
    form: DMatrix<C64>,
}

impl GaussianOperatorCF {
    pub fn from_state(state: &CorrelationMatrix) -> Self {
        Self {
            n: state.modes(),
            scale: C64::new(1.0, 0.0),
            form: mat::to_complex(state.matrix()),
        }
    }

    pub(crate) fn from_parts(n: usize, scale: C64, form: DMatrix<C64>) -> Self {
        Self { n, scale, form }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    /// CF value at `u = 0`, i.e. the operator's trace.
    pub fn trace(&self) -> C64 {
        self.scale
    }

    pub fn scale(&self) -> C64 {
        self.scale
    }

    pub fn form(&self) -> &DMatrix<C64> {
        &self.form
    }

    /// The form as a real matrix, once its imaginary residue is certified
    /// small.
    pub fn real_form(&self, residue_tol: f64) -> Result<DMatrix<f64>> {
        mat::real_part_checked(&self.form, residue_tol, "Gaussian operator form")
    }

    pub fn eval(&self, u: &DVector<f64>) -> Result<C64> {
        if u.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: u.len(),
            });
        }
        let uc = DVector::from_iterator(u.len(), u.iter().map(|&x| C64::new(x, 0.0)));
        let q = (uc.transpose() * &self.form * uc)[(0, 0)];
        Ok(self.scale * (q * C64::new(-0.25, 0.0)).exp())
    }

    /// Characteristic function of the operator product `self * other`:
    /// scale `K1 K2 det((X1 + X2)/2)^{-1/2}`, form
    /// `X2 - (X2 - iJ)(X1 + X2)^{-1}(X2 + iJ)`.
    pub fn product(&self, other: &GaussianOperatorCF) -> Result<GaussianOperatorCF> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: 2 * other.n,
            });
        }
        let n = self.n;
        let j = mat::j_matrix_c(n);
        let i_j = &j * C64::new(0.0, 1.0);
        let sum = &self.form + &other.form;
        let inv = sum
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("singular form sum in CF product".into()))?;
        let minus = &other.form - &i_j;
        let plus = &other.form + &i_j;
        let form = &other.form - minus * inv * plus;
        let det = (&sum * C64::new(0.5, 0.0)).determinant();
        let scale = self.scale * other.scale / det.sqrt();
        Ok(GaussianOperatorCF {
            n,
            scale,
            form: mat::symmetrize_c(&form),
        })
    }
}

/// CF of `rho1 * rho2` for two density operators; its trace (value at 0) is
/// `Tr rho1 rho2`.
pub fn product_cf(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<GaussianOperatorCF> {
    a1.require_valid(tol::VALIDITY_SLACK)?;
    a2.require_valid(tol::VALIDITY_SLACK)?;
    GaussianOperatorCF::from_state(a1).product(&GaussianOperatorCF::from_state(a2))
}

/// CF of `rho^2`: scale `(det A)^{-1/2}`, form `(A - J A^{-1} J) / 2`.
pub fn square_cf(state: &CorrelationMatrix) -> Result<GaussianOperatorCF> {
    state.require_valid(tol::VALIDITY_SLACK)?;
    let a = state.matrix();
    let j = mat::j_matrix(state.modes());
    let inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let form = (a - &j * inv * &j) * 0.5;
    Ok(GaussianOperatorCF {
        n: state.modes(),
        scale: C64::new(1.0 / a.determinant().sqrt(), 0.0),
        form: mat::to_complex(&mat::symmetrize(&form)),
    })
}

/// `Tr rho1 rho2` in closed form.
pub fn tr_product(a1: &CorrelationMatrix, a2: &CorrelationMatrix) -> Result<f64> {
    let cf = product_cf(a1, a2)?;
    let t = cf.trace();
    if t.im.abs() > tol::CF_IMAG_RESIDUE {
        return Err(Error::NumericalFailure(format!(
            "Tr(rho1 rho2) imaginary residue {:.3e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// `Tr rho1 rho2 rho3` via two CF products (complex in general).
pub fn tr_triple(
    a1: &CorrelationMatrix,
    a2: &CorrelationMatrix,
    a3: &CorrelationMatrix,
) -> Result<C64> {
    let cf12 = product_cf(a1, a2)?;
    let cf = cf12.product(&GaussianOperatorCF::from_state(a3))?;
    Ok(cf.trace())
}

/// Gaussian P-function of a classical state with `A - I` positive definite:
/// density `normalizer * exp(v^T Q v)` with `Q = J (A - I)^{-1} J` negative
/// definite and `normalizer = pi^{-n} det(A - I)^{-1/2}`; integrates to 1.
#[derive(Debug, Clone)]
pub struct GaussianPFunction {
    n: usize,
    normalizer: f64,
    quadratic_form: DMatrix<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianPFunction {
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// The negative-definite form `Q = J (A - I)^{-1} J`.
    pub fn quadratic_form(&self) -> &DMatrix<f64> {
        &self.quadratic_form
    }

    pub fn density(&self, v: &DVector<f64>) -> Result<f64> {
        if v.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: v.len(),
            });
        }
        let q = (v.transpose() * &self.quadratic_form * v)[(0, 0)];
        Ok(self.normalizer * q.exp())
    }

    /// Draws phase-space points from the P-density. Identical seeds give
    /// identical streams.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<DVector<f64>> {
        let chol = Cholesky::new(self.covariance.clone())
            .expect("P-function covariance is positive definite by construction");
        let l = chol.l();
        let dim = 2 * self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let z = DVector::from_iterator(
                    dim,
                    (0..dim).map(|_| StandardNormal.sample(&mut rng)),
                );
                &l * z
            })
            .collect()
    }
}

/// P-function of a strictly classical state; `A - I` singular or indefinite
/// reports `NoPRepresentation`.
pub fn p_function(state: &CorrelationMatrix) -> Result<GaussianPFunction> {
    let n = state.modes();
    let dim = state.dim();
    let shifted = state.matrix() - DMatrix::<f64>::identity(dim, dim);
    if Cholesky::new(shifted.clone()).is_none() {
        return Err(Error::NoPRepresentation);
    }
    let det = shifted.determinant();
    if det <= 0.0 {
        return Err(Error::NoPRepresentation);
    }
    let normalizer = std::f64::consts::PI.powi(-(n as i32)) / det.sqrt();
    let j = mat::j_matrix(n);
    let inv = shifted
        .clone()
        .try_inverse()
        .ok_or(Error::NoPRepresentation)?;
    let quadratic_form = mat::symmetrize(&(&j * inv * &j));
    // sampling covariance: -J (A - I) J / 2
    let covariance = mat::symmetrize(&(-(&j * shifted * &j) * 0.5));
    Ok(GaussianPFunction {
        n,
        normalizer,
        quadratic_form,
        covariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::max_abs_diff;

    fn diag2(a: f64, b: f64) -> CorrelationMatrix {
        CorrelationMatrix::new(DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b])).unwrap()
    }

    #[test]
    fn cf_eval_examples() {
        let vac = CorrelationMatrix::vacuum(1);
        let zero = DVector::from_column_slice(&[0.0, 0.0]);
        assert_eq!(cf_eval(&vac, &zero).unwrap(), 1.0);

        let u = DVector::from_column_slice(&[2.0, 0.0]);
        assert!((cf_eval(&vac, &u).unwrap() - (-1.0_f64).exp()).abs() < 1e-12);

        let th = diag2(3.0, 3.0);
        assert!((cf_eval(&th, &u).unwrap() - (-3.0_f64).exp()).abs() < 1e-12);

        let bad = DVector::from_column_slice(&[1.0]);
        assert!(cf_eval(&vac, &bad).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&CorrelationMatrix::vacuum(1), 1e-9),
            StateClass::PureCoherent
        );
        assert_eq!(classify(&diag2(4.0, 0.25), 1e-9), StateClass::PureNonclassical);
        assert_eq!(classify(&diag2(2.0, 0.4), 1e-9), StateClass::Invalid);
        assert_eq!(classify(&diag2(3.0, 3.0), 1e-9), StateClass::MixedClassical);
        // d = m^2 boundary states count as classical
        assert_eq!(classify(&diag2(4.0, 1.0), 1e-9), StateClass::MixedClassical);
        assert_eq!(classify(&diag2(4.0, 0.5), 1e-9), StateClass::MixedNonclassical);
    }

    #[test]
    fn classify_rotation_invariant() {
        let p = OneModeParams::new(1.0, 2.0, 0.0).unwrap();
        for k in 0..8 {
            let theta = k as f64 * 0.3;
            let q = OneModeParams::new(1.0, 2.0, theta).unwrap();
            assert_eq!(classify(&p.to_cov(), 1e-9), classify(&q.to_cov(), 1e-9));
        }
    }

    #[test]
    fn params_to_cov_examples() {
        let iso = OneModeParams::new(1.0, 1.0, 0.7).unwrap();
        assert!(max_abs_diff(iso.to_cov().matrix(), &DMatrix::identity(2, 2)) < 1e-15);

        let p = OneModeParams::new(2.0, 2.0_f64.sqrt(), 0.0).unwrap();
        assert!(max_abs_diff(p.to_cov().matrix(), diag2(4.0, 1.0).matrix()) < 1e-12);

        let p = OneModeParams::new(1.0, 2.0, 0.0).unwrap();
        assert!(max_abs_diff(p.to_cov().matrix(), diag2(4.0, 0.25).matrix()) < 1e-12);

        assert!(OneModeParams::new(0.5, 1.0, 0.0).is_err());
        assert!(OneModeParams::new(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn cov_to_params_examples() {
        let p = cov_to_params(&diag2(4.0, 1.0)).unwrap();
        assert!((p.d() - 2.0).abs() < 1e-12);
        assert!((p.m() - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!(p.theta().abs() < 1e-12);

        let p = cov_to_params(&CorrelationMatrix::vacuum(1)).unwrap();
        assert!((p.d() - 1.0).abs() < 1e-12);
        assert!((p.m() - 1.0).abs() < 1e-12);
        assert_eq!(p.theta(), 0.0);

        let p = cov_to_params(&diag2(0.25, 4.0)).unwrap();
        assert!((p.d() - 1.0).abs() < 1e-12);
        assert!((p.m() - 2.0).abs() < 1e-12);
        assert!((p.theta() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        assert!(cov_to_params(&diag2(2.0, 0.4)).is_err());
    }

    #[test]
    fn params_round_trip() {
        for &(d, m, theta) in &[
            (1.0, 1.0, 0.0),
            (1.0, 2.0, 0.4),
            (2.5, 1.3, 1.1),
            (3.0, 2.0, 2.9),
            (1.7, 1.0, 0.9), // isotropic squeeze: theta collapses to 0
        ] {
            let p = OneModeParams::new(d, m, theta).unwrap();
            let back = cov_to_params(&p.to_cov()).unwrap();
            assert!((back.d() - d).abs() < 1e-10);
            assert!((back.m() - m).abs() < 1e-10);
            let cov = back.to_cov();
            assert!(max_abs_diff(cov.matrix(), p.to_cov().matrix()) < 1e-10);
        }
    }

    #[test]
    fn product_cf_vacuum_idempotent() {
        let vac = CorrelationMatrix::vacuum(1);
        let cf = product_cf(&vac, &vac).unwrap();
        assert!((cf.trace().re - 1.0).abs() < 1e-12);
        assert!(cf.trace().im.abs() < 1e-14);
        let form = cf.real_form(1e-10).unwrap();
        assert!(max_abs_diff(&form, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn product_cf_thermal_purity() {
        let th = diag2(3.0, 3.0);
        let t = tr_product(&th, &th).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_cf_examples() {
        let vac = CorrelationMatrix::vacuum(1);
        let cf = square_cf(&vac).unwrap();
        assert!((cf.trace().re - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&cf.real_form(0.0).unwrap(), &DMatrix::identity(2, 2)) < 1e-14);

        let th = diag2(3.0, 3.0);
        let cf = square_cf(&th).unwrap();
        assert!((cf.trace().re - 1.0 / 3.0).abs() < 1e-14);
        let expect = DMatrix::<f64>::identity(2, 2) * (5.0 / 3.0);
        assert!(max_abs_diff(&cf.real_form(0.0).unwrap(), &expect) < 1e-12);

        // pure state: form equals A
        let p = OneModeParams::new(1.0, 2.0, 0.7).unwrap().to_cov();
        let cf = square_cf(&p).unwrap();
        assert!(max_abs_diff(&cf.real_form(0.0).unwrap(), p.matrix()) < 1e-10);
        assert!((cf.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_matches_square() {
        for &(d, m, theta) in &[(1.0, 1.0, 0.0), (3.0, 1.0, 0.0), (2.0, 1.5, 0.8)] {
            let a = OneModeParams::new(d, m, theta).unwrap().to_cov();
            let prod = product_cf(&a, &a).unwrap();
            let sq = square_cf(&a).unwrap();
            assert!((prod.trace() - sq.trace()).norm() < 1e-12);
            let diff = prod.form() - sq.form();
            assert!(diff.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn state_dominates_square_form() {
        // A - form(rho^2) = S^T (D - D^{-1}) S / 2 is PSD, zero iff pure
        for &(d, m, theta) in &[(1.0, 2.0, 0.3), (2.0, 1.2, 1.0), (3.0, 1.0, 0.0)] {
            let a = OneModeParams::new(d, m, theta).unwrap().to_cov();
            let form = square_cf(&a).unwrap().real_form(1e-10).unwrap();
            let gap = a.matrix() - &form;
            let min = gap
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            assert!(min > -1e-12);
            if d == 1.0 {
                assert!(mat::max_abs(&gap) < 1e-10, "pure state: form equals A");
            } else {
                assert!(min > 1e-6, "mixed state: A dominates strictly");
            }
        }
    }

    #[test]
    fn p_function_examples() {
        let th = diag2(3.0, 3.0);
        let p = p_function(&th).unwrap();
        let zero = DVector::from_column_slice(&[0.0, 0.0]);
        assert!((p.density(&zero).unwrap() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);

        assert!(matches!(
            p_function(&CorrelationMatrix::vacuum(1)),
            Err(Error::NoPRepresentation)
        ));
        assert!(matches!(
            p_function(&diag2(4.0, 0.25)),
            Err(Error::NoPRepresentation)
        ));
    }

    #[test]
    fn p_function_normalization_closed_form() {
        // integral of N exp(v^T Q v) = N (2 pi)^n det(-2Q)^{-1/2} must be 1
        for state in [diag2(3.0, 3.0), diag2(5.0, 2.0)] {
            let p = p_function(&state).unwrap();
            let q = p.quadratic_form();
            let neg2q = q * -2.0;
            let integral = p.normalizer()
                * (2.0 * std::f64::consts::PI)
                / neg2q.determinant().sqrt();
            assert!((integral - 1.0).abs() < 1e-12, "integral = {integral}");
        }
    }

    #[test]
    fn p_function_sampling_deterministic() {
        let th = diag2(3.0, 3.0);
        let p = p_function(&th).unwrap();
        let s1 = p.sample(5, 99);
        let s2 = p.sample(5, 99);
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn p_function_monte_carlo_reproduces_cf() {
        // mixing displaced vacua over the P-density must reproduce the CF
        let state = {
            let r = mat::rotation2(0.6);
            let a = r.transpose() * DMatrix::from_row_slice(2, 2, &[6.0, 0.0, 0.0, 2.5]) * r;
            CorrelationMatrix::new(mat::symmetrize(&a)).unwrap()
        };
        let p = p_function(&state).unwrap();
        let samples = p.sample(40_000, 2024);
        let j = mat::j_matrix(1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = DVector::from_iterator(2, (0..2).map(|_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                0.6 * x
            }));
            let vac = (-0.25 * (u.transpose() * &u)[(0, 0)]).exp();
            let ju = &j * &u;
            let mut mean = 0.0;
            let mut mean_sq = 0.0;
            for v in &samples {
                let c = (v.transpose() * &ju)[(0, 0)].cos() * vac;
                mean += c;
                mean_sq += c * c;
            }
            let nsamp = samples.len() as f64;
            mean /= nsamp;
            mean_sq /= nsamp;
            let se = ((mean_sq - mean * mean).max(0.0) / nsamp).sqrt();
            let expect = cf_eval(&state, &u).unwrap();
            assert!(
                (mean - expect).abs() <= 5.0 * se + 1e-12,
                "MC {mean} vs CF {expect} (se {se:.2e})"
            );
        }
    }

    #[test]
    fn direct_sum_blocks() {
        let a = diag2(4.0, 1.0);
        let b = diag2(3.0, 3.0);
        let sum = a.direct_sum(&b);
        assert_eq!(sum.modes(), 2);
        let m = sum.matrix();
        assert_eq!(m[(0, 0)], 4.0);
        assert_eq!(m[(1, 1)], 3.0);
        assert_eq!(m[(2, 2)], 1.0);
        assert_eq!(m[(3, 3)], 3.0);
        let spec = sum.symplectic_spectrum().unwrap();
        assert!((spec[0] - 3.0).abs() < 1e-12);
        assert!((spec[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, -0.3, 1.0]);
        assert!(matches!(CorrelationMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }
}
