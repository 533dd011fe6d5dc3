//! Nonclassicality distance measures for zero-mean Gaussian quantum states.
//!
//! A Gaussian state is represented by its correlation matrix `A`, the real
//! symmetric matrix in the characteristic function
//! `CF_u(rho) = exp(-u^T A u / 4)` (vacuum is `A = I`). On top of that
//! representation the crate provides:
//!
//! - [`symplectic`]: the standard form `J`, symplectic predicates, the
//!   symplectic spectrum, and the Williamson normal form `A = S^T D S`.
//! - [`states`]: state construction, classification (valid / pure /
//!   classical), characteristic-function algebra for operator products, the
//!   Gaussian P-function, and the one-mode `(d, m, theta)` parametrization.
//! - [`sqrt_map`]: the quadratic form `phi(A)` of the characteristic function
//!   of `sqrt(rho)`, solving `phi(A) - J phi(A)^{-1} J = 2 A`.
//! - [`measures`]: Uhlmann fidelity (general multimode and one-mode closed
//!   forms), the Holevo overlap `Tr sqrt(rho1) sqrt(rho2)`, the one-mode
//!   nonclassicality measures `chi` and `phi`, and trace-distance bounds.
//! - [`noise`]: the Gaussian noise channel `Gamma(A) = A - J G^{-1} J`, its
//!   one-mode parametric laws, and the chi-monotonicity failure boundary.
//! - [`optimizer`]: numerical suprema of fidelity/overlap over the set of
//!   classical Gaussian states.
//! - [`fock`]: a brute-force truncated Fock-basis oracle (density matrices,
//!   Uhlmann fidelity, overlap, trace distance) used to validate every
//!   closed form at desk scale.
//! - [`io`]: the JSON state schema shared with the command-line tool.

#![forbid(unsafe_code)]

pub mod error;
pub mod fock;
pub mod io;
mod mat;
pub mod measures;
pub mod noise;
pub mod optimizer;
pub mod sqrt_map;
pub mod states;
pub mod symplectic;
pub mod tol;

pub use error::{Error, Result};
pub use states::{CorrelationMatrix, OneModeParams, StateClass};
