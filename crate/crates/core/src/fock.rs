//! Brute-force truncated Fock-basis oracle.
//!
//! Builds one-mode squeezed thermal density matrices by explicit operator
//! algebra (`rho = R(theta) S(r) rho_th S(r)^T R(theta)^dag` with
//! `n_bar = (d-1)/2`, `r = ln m`) and computes fidelity, overlap, and trace
//! distance by Hermitian eigendecomposition. Everything here is independent
//! of the closed-form phase-space pipeline it validates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mat::C64;
use crate::states::OneModeParams;
use crate::tol;

/// Truncated Fock-basis density matrix.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    dim: usize,
    rho: DMatrix<C64>,
    trace_deficit: f64,
}

impl FockDensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    /// Truncation loss `1 - Tr(rho)` observed before renormalization.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    /// Wraps an explicit density matrix: Hermitian within 1e-12, eigenvalues
    /// above the clip threshold, unit trace after renormalization.
    pub fn from_matrix(rho: DMatrix<C64>) -> Result<Self> {
        let dim = rho.nrows();
        if rho.ncols() != dim || dim < 2 {
            return Err(Error::NotSquare {
                rows: dim,
                cols: rho.ncols(),
            });
        }
        let herm_residual = (&rho - rho.adjoint())
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()));
        if herm_residual > 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "density matrix hermiticity residual {herm_residual:.3e}"
            )));
        }
        let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
        let eig = rho.symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_eig = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        if min_eig < -tol::EIGENVALUE_CLIP {
            return Err(Error::NumericalFailure(format!(
                "density matrix eigenvalue {min_eig:.3e} below clip threshold"
            )));
        }
        // eigenvalues at relative machine noise are zeroed, not square-rooted
        let floor = tol::RELATIVE_EIG_FLOOR * max_eig;
        let clip = |l: f64| if l < floor { 0.0 } else { l };
        let total: f64 = eig.eigenvalues.iter().map(|&l| clip(l)).sum();
        if total <= 0.0 {
            return Err(Error::NumericalFailure("density matrix has zero trace".into()));
        }
        let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(clip(l) / total, 0.0)));
        Ok(Self {
            dim,
            rho: &eig.eigenvectors * diag * eig.eigenvectors.adjoint(),
            trace_deficit: 0.0,
        })
    }

    /// Convex mixture of two oracle states on the same truncation.
    pub fn mix(w1: f64, r1: &FockDensityMatrix, w2: f64, r2: &FockDensityMatrix) -> Result<Self> {
        if r1.dim != r2.dim {
            return Err(Error::DimensionMismatch {
                expected: r1.dim,
                got: r2.dim,
            });
        }
        if w1 < 0.0 || w2 < 0.0 || (w1 + w2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams("mixture weights must be convex".into()));
        }
        let rho = &r1.rho * C64::new(w1, 0.0) + &r2.rho * C64::new(w2, 0.0);
        Ok(Self {
            dim: r1.dim,
            rho,
            trace_deficit: w1 * r1.trace_deficit + w2 * r2.trace_deficit,
        })
    }
}

/// Annihilation operator on a `dim`-dimensional truncation.
fn annihilation(dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = (k as f64).sqrt();
    }
    a
}

/// Squeeze operator `exp((r/2)(a^2 - a^dag^2))`, computed on a padded
/// truncation and cropped by the caller.
fn squeeze_operator(r: f64, dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    let a2 = &a * &a;
    let k = (&a2 - a2.transpose()) * (r / 2.0);
    k.exp()
}

/// Builds the one-mode squeezed thermal state at truncation `n_trunc` with
/// the default deficit cap.
pub fn build_one_mode(p: &OneModeParams, n_trunc: usize) -> Result<FockDensityMatrix> {
    build_one_mode_with_cap(p, n_trunc, tol::TRUNCATION_CAP)
}

/// As [`build_one_mode`] with an explicit cap on the truncation loss.
///
/// The squeeze exponential is evaluated at twice the requested truncation
/// and the assembled operator is cropped afterwards.
pub fn build_one_mode_with_cap(
    p: &OneModeParams,
    n_trunc: usize,
    cap: f64,
) -> Result<FockDensityMatrix> {
    if n_trunc < 2 {
        return Err(Error::InvalidParams("truncation must be >= 2".into()));
    }
    let big = 2 * n_trunc;

    // thermal occupation p_k = (1 - x) x^k, x = (d - 1)/(d + 1)
    let x = (p.d() - 1.0) / (p.d() + 1.0);
    let mut thermal = DMatrix::<f64>::zeros(big, big);
    if x == 0.0 {
        thermal[(0, 0)] = 1.0;
    } else {
        let mut w = 1.0 - x;
        for k in 0..big {
            thermal[(k, k)] = w;
            w *= x;
        }
    }

    let real_rho = if p.m() > 1.0 {
        let s = squeeze_operator(p.m().ln(), big);
        &s * thermal * s.transpose()
    } else {
        thermal
    };

    // rotation is diagonal in the number basis: rho_jk *= e^{-i theta (j-k)}
    let mut rho = DMatrix::<C64>::zeros(n_trunc, n_trunc);
    for j in 0..n_trunc {
        for k in 0..n_trunc {
            let phase = -p.theta() * (j as f64 - k as f64);
            rho[(j, k)] = C64::new(phase.cos(), phase.sin()) * real_rho[(j, k)];
        }
    }

    let trace: f64 = (0..n_trunc).map(|k| rho[(k, k)].re).sum();
    let trace_deficit = (1.0 - trace).max(0.0);
    if trace_deficit > cap {
        return Err(Error::TruncationTooSmall {
            deficit: trace_deficit,
            cap,
        });
    }

    // hermitize, clip round-off negatives, renormalize
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = rho.symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -tol::EIGENVALUE_CLIP {
        return Err(Error::NumericalFailure(format!(
            "oracle state eigenvalue {min_eig:.3e} below clip threshold"
        )));
    }
    let clipped = DVector::from_iterator(n_trunc, eig.eigenvalues.iter().map(|&l| l.max(0.0)));
    let total: f64 = clipped.iter().sum();
    let diag = DMatrix::from_diagonal(&clipped.map(|l| C64::new(l / total, 0.0)));
    let rho = &eig.eigenvectors * diag * eig.eigenvectors.adjoint();

    Ok(FockDensityMatrix {
        dim: n_trunc,
        rho,
        trace_deficit,
    })
}

fn check_dims(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<()> {
    if r1.dim != r2.dim {
        return Err(Error::DimensionMismatch {
            expected: r1.dim,
            got: r2.dim,
        });
    }
    Ok(())
}

/// Hermitian principal square root. Spectrum entries below the relative
/// machine-noise floor are zeroed rather than square-rooted.
fn herm_sqrt(rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let eig = rho.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -tol::EIGENVALUE_CLIP {
        return Err(Error::NumericalFailure(format!(
            "matrix square root: eigenvalue {min_eig:.3e} too negative"
        )));
    }
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let floor = tol::RELATIVE_EIG_FLOOR * max_eig;
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| C64::new(if l < floor { 0.0 } else { l.sqrt() }, 0.0)),
    ));
    Ok(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())
}

/// Uhlmann fidelity `[Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2`.
pub fn oracle_fidelity(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<f64> {
    check_dims(r1, r2)?;
    let s1 = herm_sqrt(&r1.rho)?;
    let prod = &s1 * &r2.rho * &s1;
    let prod = (&prod + prod.adjoint()) * C64::new(0.5, 0.0);
    let eig = prod.symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let floor = tol::RELATIVE_EIG_FLOOR * max_eig;
    let f: f64 = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < floor { 0.0 } else { l.sqrt() })
        .sum();
    Ok((f * f).clamp(0.0, 1.0))
}

/// Holevo overlap `Tr sqrt(rho1) sqrt(rho2)`.
pub fn oracle_overlap(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<f64> {
    check_dims(r1, r2)?;
    let s1 = herm_sqrt(&r1.rho)?;
    let s2 = herm_sqrt(&r2.rho)?;
    let t = (&s1 * &s2).trace();
    if t.im.abs() > 1e-8 {
        return Err(Error::NumericalFailure(format!(
            "overlap imaginary residue {:.3e}",
            t.im
        )));
    }
    Ok(t.re.clamp(0.0, 1.0))
}

/// `Tr sqrt(rho)`.
pub fn tr_sqrt(r: &FockDensityMatrix) -> f64 {
    let eig = r.rho.clone().symmetric_eigen();
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Trace distance `|| rho1 - rho2 ||_1` (in [0, 2]).
pub fn oracle_trace_distance(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<f64> {
    check_dims(r1, r2)?;
    let diff = &r1.rho - &r2.rho;
    let eig = diff.symmetric_eigen();
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Purity `Tr rho^2`.
pub fn purity(r: &FockDensityMatrix) -> f64 {
    (&r.rho * &r.rho).trace().re
}

/// Characteristic function `Tr(op V(u))` of an arbitrary one-mode operator
/// matrix, via the displacement operator
/// `V(u) = exp(alpha a^dag - alpha^* a)`, `alpha = (-u_p + i u_q)/sqrt(2)`,
/// built on a padded truncation and cropped.
pub fn cf_of_operator(op: &DMatrix<C64>, u: &DVector<f64>) -> Result<C64> {
    if u.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: u.len(),
        });
    }
    let dim = op.nrows();
    if op.ncols() != dim {
        return Err(Error::NotSquare {
            rows: dim,
            cols: op.ncols(),
        });
    }
    let big = 2 * dim;
    let alpha = C64::new(-u[0] / 2.0_f64.sqrt(), u[1] / 2.0_f64.sqrt());
    let a = annihilation(big).map(|x| C64::new(x, 0.0));
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    let disp_big = gen.exp();
    let disp = disp_big.view((0, 0), (dim, dim)).into_owned();
    Ok((op * disp).trace())
}

/// Characteristic function `Tr(rho V(u))` of an oracle state.
pub fn cf_via_displacement(r: &FockDensityMatrix, u: &DVector<f64>) -> Result<C64> {
    cf_of_operator(&r.rho, u)
}

/// Matrix square root of the oracle state (for cross-checks of the
/// square-root map's characteristic function).
pub fn sqrt_matrix(r: &FockDensityMatrix) -> Result<DMatrix<C64>> {
    herm_sqrt(&r.rho)
}
