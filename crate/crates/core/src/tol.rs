//! Default numerical tolerances, centralized so no routine carries ad-hoc
//! magic numbers.

/// Default tolerance for symplectic/classification predicates.
pub const PREDICATE: f64 = 1e-9;

/// Williamson reconstruction and symplecticity residual budget.
pub const RECONSTRUCTION: f64 = 1e-10;

/// Modes with symplectic eigenvalue within this band above 1 are treated as
/// pure: the radical `sqrt(d^2 - 1)` is clamped to zero to avoid negative
/// round-off under the square root.
pub const PURE_CLAMP: f64 = 1e-12;

/// Symplectic eigenvalues may undershoot 1 by round-off up to this amount
/// and are still accepted as a valid state.
pub const VALIDITY_SLACK: f64 = 1e-9;

/// Imaginary residue allowed on characteristic-function scalars that must
/// be real (traces, purities).
pub const CF_IMAG_RESIDUE: f64 = 1e-10;

/// Imaginary residue allowed on the real quadratic form recovered from the
/// complex fidelity intermediates.
pub const FIDELITY_IMAG_RESIDUE: f64 = 1e-8;

/// Default cap on the Fock-basis truncation loss `1 - Tr(rho)`.
pub const TRUNCATION_CAP: f64 = 1e-8;

/// Eigenvalues of oracle density matrices may round off below zero by this
/// much; anything worse is a failure.
pub const EIGENVALUE_CLIP: f64 = 1e-10;

/// Relative floor for eigenvalues entering matrix square roots in the
/// oracle fidelity/overlap paths: spectrum entries below
/// `RELATIVE_EIG_FLOOR * lambda_max` are machine noise whose square roots
/// would otherwise bias the trace at the 1e-8 scale.
pub const RELATIVE_EIG_FLOOR: f64 = 1e-14;

/// Condition-number cap for the Williamson decomposition.
pub const CONDITION_CAP: f64 = 1e12;
