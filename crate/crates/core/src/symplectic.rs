//! Real symplectic linear algebra.
//!
//! Conventions: phase-space vectors are stacked as `(p_1..p_n, q_1..q_n)`,
//! the standard form is `J = [[0, I], [-I, 0]]`, a matrix `S` is symplectic
//! when `S^T J S = J`, and the Williamson normal form is written row-style,
//! `A = S^T D S` with `D = diag(D0, D0)` carrying the symplectic spectrum.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::mat::{self, C64};
use crate::tol;

/// The standard symplectic form on `n` modes.
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    n: usize,
    j: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("mode count must be >= 1".into()));
        }
        Ok(Self {
            n,
            j: mat::j_matrix(n),
        })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.j
    }
}

/// Builds the standard form `J` on `n` modes.
pub fn standard_form(n: usize) -> Result<SymplecticForm> {
    SymplecticForm::new(n)
}

/// True when `||S^T J S - J||_max <= tol`.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = mat::mode_count(s)?;
    let j = mat::j_matrix(n);
    let residual = s.transpose() * &j * s - &j;
    Ok(mat::max_abs(&residual) <= tol)
}

/// Williamson normal form `A = S^T D S`.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    s: DMatrix<f64>,
    /// Symplectic eigenvalues, one per mode, descending.
    d: Vec<f64>,
}

impl WilliamsonDecomposition {
    pub fn symplectic_matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.d
    }

    pub fn modes(&self) -> usize {
        self.d.len()
    }

    /// The paired diagonal `D = diag(D0, D0)`.
    pub fn diag_matrix(&self) -> DMatrix<f64> {
        paired_diag(&self.d)
    }

    /// `S^T D S`, for residual checks against the source matrix.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.s.transpose() * self.diag_matrix() * &self.s
    }
}

/// diag(v, v) in the (p.., q..) ordering.
pub(crate) fn paired_diag(v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (k, &x) in v.iter().enumerate() {
        m[(k, k)] = x;
        m[(n + k, n + k)] = x;
    }
    m
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let scale = mat::max_abs(a).max(1.0);
    let asym = mat::max_asymmetry(a);
    if asym > 1e-8 * scale {
        return Err(Error::NotSymmetric { max_asym: asym });
    }
    Ok(mat::symmetrize(a))
}

/// Symplectic spectrum of a symmetric positive definite matrix: the moduli
/// of the (paired, purely imaginary) eigenvalues of `J A`, one per mode,
/// sorted descending.
pub fn spectrum(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = mat::mode_count(a)?;
    let a = check_symmetric(a)?;
    let root = mat::sym_sqrt(&a)?;
    let j = mat::j_matrix(n);
    let b = &root.sqrt * j * &root.sqrt;
    // -B^2 is symmetric PSD with doubly degenerate eigenvalues d_k^2.
    let c = mat::symmetrize(&(-(&b * &b)));
    let mut eigs: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (l1, l2) = (eigs[2 * k], eigs[2 * k + 1]);
        let scale = l1.abs().max(1.0);
        if (l1 - l2).abs() > 1e-6 * scale {
            return Err(Error::NumericalFailure(format!(
                "symplectic spectrum pairing failed: {l1} vs {l2}"
            )));
        }
        out.push((0.5 * (l1 + l2)).max(0.0).sqrt());
    }
    Ok(out)
}

/// Williamson decomposition of a symmetric positive definite matrix.
///
/// Diagonalizes the skew-symmetric `A^{1/2} J A^{1/2}` into 2x2 blocks and
/// assembles `S = D^{-1/2} U^T A^{1/2}`. The mode gauge is fixed
/// deterministically: within each invariant plane the rotation is chosen so
/// that the largest-magnitude pivot entry of the mode's first row of `S` is
/// positive and the second row's pivot entry vanishes.
pub fn williamson(a: &DMatrix<f64>, tol: f64) -> Result<WilliamsonDecomposition> {
    williamson_capped(a, tol, tol::CONDITION_CAP)
}

/// As [`williamson`], with an explicit condition-number cap.
pub fn williamson_capped(
    a: &DMatrix<f64>,
    tol: f64,
    cond_cap: f64,
) -> Result<WilliamsonDecomposition> {
    let n = mat::mode_count(a)?;
    let a = check_symmetric(a)?;
    let root = mat::sym_sqrt(&a)?;
    let cond = root.max_eig / root.min_eig;
    if cond > cond_cap {
        return Err(Error::IllConditioned {
            cond,
            cap: cond_cap,
        });
    }

    let j = mat::j_matrix(n);
    let mut b = &root.sqrt * &j * &root.sqrt;
    // exact antisymmetry for the pairing step below
    b = (&b - b.transpose()) * 0.5;
    let c = mat::symmetrize(&(-(&b * &b)));
    let eig = c.symmetric_eigen();

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &k| eig.eigenvalues[k].partial_cmp(&eig.eigenvalues[i]).unwrap());

    // Extract one (x, y = -Bx/d) pair per mode, re-orthogonalizing inside
    // degenerate eigenspaces.
    let mut xs: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut ys: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut ds: Vec<f64> = Vec::with_capacity(n);
    let mut idx = 0usize;
    while ds.len() < n {
        if idx >= 2 * n {
            return Err(Error::NumericalFailure(
                "Williamson pairing exhausted the eigenbasis".into(),
            ));
        }
        let lambda = eig.eigenvalues[order[idx]];
        if lambda <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let d = lambda.sqrt();
        let mut x: DVector<f64> = eig.eigenvectors.column(order[idx]).into_owned();
        idx += 1;
        // project out the planes already claimed (only bites when degenerate)
        for (xe, ye) in xs.iter().zip(ys.iter()) {
            let cx = xe.dot(&x);
            let cy = ye.dot(&x);
            x -= xe * cx + ye * cy;
        }
        let norm = x.norm();
        if norm < 1e-8 {
            continue; // partner vector of an already-claimed plane
        }
        x /= norm;
        let y = -(&b * &x) / d;
        xs.push(x);
        ys.push(y);
        ds.push(d);
    }

    // Gauge fixing: rotate each (x, y) plane so the pivot entry of the
    // mode's first row of S is positive and the second row's pivot is zero.
    let n2 = 2 * n;
    for k in 0..n {
        let r1 = xs[k].transpose() * &root.sqrt;
        let r2 = ys[k].transpose() * &root.sqrt;
        let mut pivot = 0usize;
        let mut best = -1.0_f64;
        for jcol in 0..n2 {
            let w = r1[jcol] * r1[jcol] + r2[jcol] * r2[jcol];
            if w > best {
                best = w;
                pivot = jcol;
            }
        }
        let phi = r2[pivot].atan2(r1[pivot]);
        let (sin_p, cos_p) = phi.sin_cos();
        let x_new = &xs[k] * cos_p + &ys[k] * sin_p;
        let y_new = -&xs[k] * sin_p + &ys[k] * cos_p;
        xs[k] = x_new;
        ys[k] = y_new;
    }

    let mut u = DMatrix::zeros(n2, n2);
    for k in 0..n {
        u.set_column(k, &xs[k]);
        u.set_column(n + k, &ys[k]);
    }
    let inv_sqrt_d = paired_diag(&ds.iter().map(|d| 1.0 / d.sqrt()).collect::<Vec<_>>());
    let s = inv_sqrt_d * u.transpose() * &root.sqrt;

    let decomp = WilliamsonDecomposition { s, d: ds };
    let scale = mat::max_abs(&a).max(1.0);
    let recon_err = mat::max_abs_diff(&decomp.reconstruct(), &a);
    if recon_err > tol * scale || !is_symplectic(&decomp.s, tol * scale)? {
        return Err(Error::NumericalFailure(format!(
            "Williamson residual {recon_err:.3e} above tolerance"
        )));
    }
    Ok(decomp)
}

/// One-mode Euler factorization `S = O * diag(m, 1/m) * O'`.
#[derive(Debug, Clone)]
pub struct EulerFactors {
    o: DMatrix<f64>,
    m: f64,
    o_prime: DMatrix<f64>,
}

impl EulerFactors {
    pub fn from_angles(alpha: f64, m: f64, beta: f64) -> Result<Self> {
        if m <= 0.0 {
            return Err(Error::InvalidParams("squeeze entry m must be > 0".into()));
        }
        Ok(Self {
            o: mat::rotation2(alpha),
            m,
            o_prime: mat::rotation2(beta),
        })
    }

    pub fn from_matrices(o: DMatrix<f64>, m: f64, o_prime: DMatrix<f64>, tol: f64) -> Result<Self> {
        for cand in [&o, &o_prime] {
            let gram = cand.transpose() * cand;
            if mat::max_abs_diff(&gram, &DMatrix::identity(2, 2)) > tol || !is_symplectic(cand, tol)? {
                return Err(Error::InvalidParams(
                    "Euler factors must be orthogonal symplectic".into(),
                ));
            }
        }
        if m <= 0.0 {
            return Err(Error::InvalidParams("squeeze entry m must be > 0".into()));
        }
        Ok(Self { o, m, o_prime })
    }

    pub fn squeeze(&self) -> f64 {
        self.m
    }

    pub fn assemble(&self) -> DMatrix<f64> {
        let mm = DMatrix::from_row_slice(2, 2, &[self.m, 0.0, 0.0, 1.0 / self.m]);
        &self.o * mm * &self.o_prime
    }
}

/// Random orthogonal symplectic matrix `[[X, Y], [-Y, X]]` with `X + iY`
/// Haar-ish unitary (QR of a complex Gaussian matrix).
pub fn random_orthogonal_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut z = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            z[(i, j)] = C64::new(re, im);
        }
    }
    let q = z.qr().q();
    orthogonal_symplectic_from_unitary(&q)
}

/// Embeds an n x n unitary `U = X + iY` as the orthogonal symplectic
/// `[[X, Y], [-Y, X]]`.
pub fn orthogonal_symplectic_from_unitary(u: &DMatrix<C64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = u[(i, j)];
            o[(i, j)] = z.re;
            o[(i, n + j)] = z.im;
            o[(n + i, j)] = -z.im;
            o[(n + i, n + j)] = z.re;
        }
    }
    o
}

/// Random symplectic matrix in Euler form `O * diag(M, M^{-1}) * O'` with
/// per-mode squeezes log-uniform in `[1/max_squeeze, max_squeeze]`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, max_squeeze: f64, rng: &mut R) -> DMatrix<f64> {
    let o = random_orthogonal_symplectic(n, rng);
    let o_prime = random_orthogonal_symplectic(n, rng);
    let lim = max_squeeze.max(1.0).ln();
    let ms: Vec<f64> = (0..n)
        .map(|_| (rng.random_range(-lim..=lim)).exp())
        .collect();
    let mut mm = DMatrix::zeros(2 * n, 2 * n);
    for (k, &m) in ms.iter().enumerate() {
        mm[(k, k)] = m;
        mm[(n + k, n + k)] = 1.0 / m;
    }
    o * mm * o_prime
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn standard_form_one_mode() {
        let f = standard_form(1).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(f.matrix(), &expect);
    }

    #[test]
    fn standard_form_two_modes_block_pattern() {
        let f = standard_form(2).unwrap();
        let j = f.matrix();
        for i in 0..2 {
            for k in 0..2 {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert_eq!(j[(i, 2 + k)], expect);
                assert_eq!(j[(2 + i, k)], -expect);
                assert_eq!(j[(i, k)], 0.0);
                assert_eq!(j[(2 + i, 2 + k)], 0.0);
            }
        }
    }

    #[test]
    fn standard_form_complex_structure() {
        let j = standard_form(1).unwrap().j;
        let jj = &j * &j;
        assert_eq!(jj, -DMatrix::<f64>::identity(2, 2));
        assert!((j.determinant() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standard_form_rejects_zero_modes() {
        assert!(standard_form(0).is_err());
    }

    #[test]
    fn is_symplectic_examples() {
        let id = DMatrix::<f64>::identity(2, 2);
        assert!(is_symplectic(&id, 1e-12).unwrap());

        let sq = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        assert!(is_symplectic(&sq, 1e-12).unwrap());

        let bad = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(!is_symplectic(&bad, 1e-12).unwrap());

        let odd = DMatrix::<f64>::identity(3, 3);
        assert!(is_symplectic(&odd, 1e-12).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let vac = DMatrix::<f64>::identity(2, 2);
        let s = spectrum(&vac).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12);

        let a = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        let s = spectrum(&a).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-12);

        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.4]);
        let s = spectrum(&a).unwrap();
        assert!((s[0] - 0.8_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]);
        assert!(matches!(spectrum(&asym), Err(Error::NotSymmetric { .. })));
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(spectrum(&indef).is_err());
    }

    #[test]
    fn williamson_identity() {
        let a = DMatrix::<f64>::identity(2, 2);
        let w = williamson(&a, 1e-9).unwrap();
        assert!((w.spectrum()[0] - 1.0).abs() < 1e-12);
        assert!(mat::max_abs_diff(w.symplectic_matrix(), &a) < 1e-9);
    }

    #[test]
    fn williamson_diagonal_squeezed_thermal() {
        let a = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        let w = williamson(&a, 1e-9).unwrap();
        assert!((w.spectrum()[0] - 2.0).abs() < 1e-12);
        assert!(mat::max_abs_diff(&w.reconstruct(), &a) < 1e-10);
        // gauge-fixed S is the plain diagonal squeeze here
        let expect = DMatrix::from_row_slice(2, 2, &[2.0_f64.sqrt(), 0.0, 0.0, 1.0 / 2.0_f64.sqrt()]);
        assert!(mat::max_abs_diff(w.symplectic_matrix(), &expect) < 1e-9);
    }

    #[test]
    fn williamson_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let s = random_symplectic(2, 2.0, &mut rng);
            let d = paired_diag(&[1.0 + rng.random_range(0.0..2.0), 1.0 + rng.random_range(0.0..2.0)]);
            let a = s.transpose() * d * &s;
            let a = mat::symmetrize(&a);
            let w = williamson(&a, 1e-9).unwrap();
            assert!(mat::max_abs_diff(&w.reconstruct(), &a) <= 1e-10);
            assert!(is_symplectic(w.symplectic_matrix(), 1e-10).unwrap());
        }
    }

    #[test]
    fn williamson_degenerate_modes() {
        // two modes with identical symplectic eigenvalue
        let a = DMatrix::<f64>::identity(4, 4) * 3.0;
        let w = williamson(&a, 1e-9).unwrap();
        assert!((w.spectrum()[0] - 3.0).abs() < 1e-12);
        assert!((w.spectrum()[1] - 3.0).abs() < 1e-12);
        assert!(mat::max_abs_diff(&w.reconstruct(), &a) < 1e-10);
    }

    #[test]
    fn williamson_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_symplectic(2, 1.8, &mut rng);
        let d = paired_diag(&[2.5, 1.2]);
        let a = mat::symmetrize(&(s.transpose() * d * &s));
        let w1 = williamson(&a, 1e-9).unwrap();
        let w2 = williamson(&a, 1e-9).unwrap();
        assert_eq!(w1.symplectic_matrix(), w2.symplectic_matrix());
    }

    #[test]
    fn spectrum_symplectic_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a0 = {
            let s = random_symplectic(2, 1.5, &mut rng);
            let d = paired_diag(&[2.0, 1.3]);
            mat::symmetrize(&(s.transpose() * d * &s))
        };
        let spec0 = spectrum(&a0).unwrap();
        for _ in 0..5 {
            let s = random_symplectic(2, 2.0, &mut rng);
            let a = mat::symmetrize(&(s.transpose() * &a0 * &s));
            let spec = spectrum(&a).unwrap();
            for (x, y) in spec0.iter().zip(spec.iter()) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn one_mode_spectrum_is_sqrt_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = random_symplectic(1, 2.0, &mut rng);
            let d = 1.0 + rng.random_range(0.0..3.0);
            let a = mat::symmetrize(&(s.transpose() * paired_diag(&[d]) * &s));
            let spec = spectrum(&a).unwrap();
            assert!((spec[0] - a.determinant().sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn euler_factors_assemble_symplectic() {
        let e = EulerFactors::from_angles(0.7, 1.9, -1.3).unwrap();
        let s = e.assemble();
        assert!(is_symplectic(&s, 1e-12).unwrap());
        assert!((s.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_orthogonal_symplectic_is_both() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            let o = random_orthogonal_symplectic(n, &mut rng);
            let gram = o.transpose() * &o;
            assert!(mat::max_abs_diff(&gram, &DMatrix::identity(2 * n, 2 * n)) < 1e-12);
            assert!(is_symplectic(&o, 1e-12).unwrap());
        }
    }
}
