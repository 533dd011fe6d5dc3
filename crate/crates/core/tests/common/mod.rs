//! Shared generators for the integration suites.
#![allow(dead_code)] // each suite uses a different subset

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncdist_core::states::{CorrelationMatrix, OneModeParams};
use ncdist_core::symplectic;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform one-mode parameters in a `d`/`m` box with free rotation.
pub fn random_one_mode(rng: &mut ChaCha8Rng, d_max: f64, m_max: f64) -> OneModeParams {
    let d = 1.0 + rng.random_range(0.0..(d_max - 1.0));
    let m = 1.0 + rng.random_range(0.0..(m_max - 1.0));
    let theta = rng.random_range(0.0..std::f64::consts::PI);
    OneModeParams::new(d, m, theta).unwrap()
}

/// One-mode parameters with `m > sqrt(d)` (strictly nonclassical).
pub fn random_nonclassical(rng: &mut ChaCha8Rng, d_max: f64, m_max: f64) -> OneModeParams {
    loop {
        let d = 1.0 + rng.random_range(0.0..(d_max - 1.0));
        let floor = d.sqrt() * 1.02;
        if floor >= m_max {
            continue;
        }
        let m = rng.random_range(floor..m_max);
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        return OneModeParams::new(d, m, theta).unwrap();
    }
}

/// Random valid multimode state `S^T D S` with `d_k` in `[1, d_max]`.
pub fn random_state(
    rng: &mut ChaCha8Rng,
    modes: usize,
    d_max: f64,
    max_squeeze: f64,
) -> CorrelationMatrix {
    let s = symplectic::random_symplectic(modes, max_squeeze, rng);
    let mut diag = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        let d = 1.0 + rng.random_range(0.0..(d_max - 1.0));
        diag[(k, k)] = d;
        diag[(modes + k, modes + k)] = d;
    }
    let a = s.transpose() * diag * &s;
    CorrelationMatrix::new((&a + a.transpose()) * 0.5).unwrap()
}
