//! Small shared matrix helpers (crate-internal).

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Standard form J = [[0, I], [-I, 0]] for n modes.
pub fn j_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

pub fn j_matrix_c(n: usize) -> DMatrix<C64> {
    j_matrix(n).map(|x| C64::new(x, 0.0))
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_imag(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn symmetrize_c(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.transpose()) * C64::new(0.5, 0.0)
}

/// Checked square/even-dimension guard; returns the mode count.
pub fn mode_count(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension { dim: m.nrows() });
    }
    Ok(m.nrows() / 2)
}

/// Discards a complex matrix's imaginary part after checking it is small.
pub fn real_part_checked(m: &DMatrix<C64>, residue_tol: f64, what: &str) -> Result<DMatrix<f64>> {
    let imag = max_imag(m);
    if imag > residue_tol {
        return Err(Error::NumericalFailure(format!(
            "{what}: imaginary residue {imag:.3e} exceeds {residue_tol:.3e}"
        )));
    }
    Ok(m.map(|z| z.re))
}

pub struct SymSqrt {
    pub sqrt: DMatrix<f64>,
    pub min_eig: f64,
    pub max_eig: f64,
}

/// Symmetric square root via eigendecomposition. Fails on
/// non-positive-definite input.
pub fn sym_sqrt(a: &DMatrix<f64>) -> Result<SymSqrt> {
    let eig = symmetrize(a).symmetric_eigen();
    let mut min_eig = f64::INFINITY;
    let mut max_eig: f64 = 0.0;
    for &l in eig.eigenvalues.iter() {
        min_eig = min_eig.min(l);
        max_eig = max_eig.max(l);
    }
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let v = &eig.eigenvectors;
    let sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt()));
    Ok(SymSqrt {
        sqrt: v * sqrt_d * v.transpose(),
        min_eig,
        max_eig,
    })
}

/// 2x2 rotation [[cos t, sin t], [-sin t, cos t]].
pub fn rotation2(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}
