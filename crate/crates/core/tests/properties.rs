//! Property-based invariants across the phase-space machinery.

mod common;

use nalgebra::DVector;
use proptest::prelude::*;

use common::{random_state, rng};
use ncdist_core::measures;
use ncdist_core::noise;
use ncdist_core::states::{
    cf_eval, classify, cov_to_params, params_to_cov, product_cf, square_cf, CorrelationMatrix,
    OneModeParams,
};
use ncdist_core::symplectic;

fn max_abs_diff(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

proptest! {
    #[test]
    fn williamson_reconstructs_random_states(seed in any::<u64>(), modes in 1usize..=3) {
        let mut r = rng(seed);
        let a = random_state(&mut r, modes, 3.5, 1.8);
        let w = a.williamson(1e-9).unwrap();
        prop_assert!(max_abs_diff(&w.reconstruct(), a.matrix()) <= 1e-10);
        prop_assert!(symplectic::is_symplectic(w.symplectic_matrix(), 1e-10).unwrap());
        for &d in w.spectrum() {
            prop_assert!(d >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn spectrum_invariant_under_symplectic_conjugation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_state(&mut r, 2, 3.0, 1.5);
        let spec_a = a.symplectic_spectrum().unwrap();
        let s = symplectic::random_symplectic(2, 1.6, &mut r);
        let m = s.transpose() * a.matrix() * &s;
        let conj = CorrelationMatrix::new((&m + m.transpose()) * 0.5).unwrap();
        let spec_b = conj.symplectic_spectrum().unwrap();
        for (x, y) in spec_a.iter().zip(spec_b.iter()) {
            prop_assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn one_mode_round_trip(d in 1.0_f64..4.0, m in 1.0_f64..3.0, theta in 0.0_f64..std::f64::consts::PI) {
        let p = OneModeParams::new(d, m, theta).unwrap();
        let back = cov_to_params(&p.to_cov()).unwrap();
        prop_assert!((back.d() - d).abs() <= 1e-10);
        prop_assert!((back.m() - m).abs() <= 1e-10);
        prop_assert!(max_abs_diff(back.to_cov().matrix(), p.to_cov().matrix()) <= 1e-10);
    }

    #[test]
    fn product_agrees_with_square(d in 1.0_f64..3.5, m in 1.0_f64..2.5, theta in 0.0_f64..std::f64::consts::PI) {
        let a = params_to_cov(&OneModeParams::new(d, m, theta).unwrap());
        let prod = product_cf(&a, &a).unwrap();
        let sq = square_cf(&a).unwrap();
        prop_assert!((prod.trace() - sq.trace()).norm() <= 1e-12);
        let diff = prod.form() - sq.form();
        prop_assert!(diff.iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn cf_values_lie_in_unit_interval(
        d in 1.0_f64..4.0,
        m in 1.0_f64..2.5,
        theta in 0.0_f64..std::f64::consts::PI,
        u1 in -3.0_f64..3.0,
        u2 in -3.0_f64..3.0,
    ) {
        let a = params_to_cov(&OneModeParams::new(d, m, theta).unwrap());
        let v = cf_eval(&a, &DVector::from_column_slice(&[u1, u2])).unwrap();
        prop_assert!(v > 0.0 && v <= 1.0);
    }

    #[test]
    fn classify_rotation_invariant(
        d in 1.0_f64..3.0,
        m in 1.0_f64..2.5,
        t1 in 0.0_f64..std::f64::consts::PI,
        t2 in 0.0_f64..std::f64::consts::PI,
    ) {
        let a = params_to_cov(&OneModeParams::new(d, m, t1).unwrap());
        let b = params_to_cov(&OneModeParams::new(d, m, t2).unwrap());
        prop_assert_eq!(classify(&a, 1e-9), classify(&b, 1e-9));
    }

    #[test]
    fn noise_routes_agree(
        d in 1.0_f64..3.0,
        m in 1.0_f64..2.5,
        theta in 0.0_f64..std::f64::consts::PI,
        g in 0.05_f64..20.0,
    ) {
        let p = OneModeParams::new(d, m, theta).unwrap();
        let kernel = noise::NoiseKernel::scalar(1, g).unwrap();
        let via_matrix = cov_to_params(&noise::apply_noise(&p.to_cov(), &kernel).unwrap()).unwrap();
        let via_params = noise::noise_one_mode(&p, g).unwrap();
        prop_assert!((via_matrix.d() - via_params.d()).abs() <= 1e-12);
        prop_assert!((via_matrix.m() - via_params.m()).abs() <= 1e-12);
    }

    #[test]
    fn noise_strength_recovery_round_trip(
        d in 1.0_f64..3.0,
        m in 1.0_f64..2.5,
        g in 0.05_f64..50.0,
    ) {
        let p = OneModeParams::new(d, m, 0.0).unwrap();
        let noisy = noise::noise_one_mode(&p, g).unwrap();
        let recovered = noise::noise_strength_from_growth(&p, noisy.d()).unwrap();
        prop_assert!((recovered - 1.0 / g).abs() <= 1e-10);
    }

    #[test]
    fn fidelity_param_and_matrix_routes_agree(
        d1 in 1.0_f64..3.0, m1 in 1.0_f64..2.2, t1 in 0.0_f64..std::f64::consts::PI,
        d2 in 1.0_f64..3.0, m2 in 1.0_f64..2.2, t2 in 0.0_f64..std::f64::consts::PI,
    ) {
        let p1 = OneModeParams::new(d1, m1, t1).unwrap();
        let p2 = OneModeParams::new(d2, m2, t2).unwrap();
        let via_params = measures::fidelity_one_mode_params(&p1, &p2);
        let via_matrix = measures::fidelity_one_mode(&p1.to_cov(), &p2.to_cov()).unwrap();
        prop_assert!((via_params - via_matrix).abs() <= 1e-12);
        let h_params = measures::overlap_one_mode(&p1, &p2);
        let h_matrix = measures::holevo_overlap(&p1.to_cov(), &p2.to_cov()).unwrap();
        prop_assert!((h_params - h_matrix).abs() <= 1e-12);
    }

    #[test]
    fn euler_factors_always_symplectic(alpha in -3.2_f64..3.2, lm in -1.0_f64..1.0, beta in -3.2_f64..3.2) {
        let factors = symplectic::EulerFactors::from_angles(alpha, lm.exp(), beta).unwrap();
        prop_assert!(symplectic::is_symplectic(&factors.assemble(), 1e-12).unwrap());
    }
}
