use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ads_core::{Complex64, SpacetimePoint};
use boundary_data::*;
use proptest::prelude::*;

fn unit(a: f64) -> Complex64 {
    Complex64::from_polar(1.0, a)
}

/// Dense regular grid over the same capped quadruple family.
fn brute_force_norm(phi: &QuasiSymmetricMap, n_psi: usize, n_l: usize, n_chi: usize) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..n_psi {
        let psi = TAU * i as f64 / n_psi as f64;
        for j in 0..=n_l {
            let t = (0.5 * L_MAX * j as f64 / n_l as f64).tanh();
            for k in 0..n_chi {
                let chi = FRAC_PI_2 * k as f64 / n_chi as f64;
                let img: Vec<Complex64> = (0..4)
                    .map(|m| {
                        let z = unit(chi + FRAC_PI_2 * m as f64);
                        let w = (z + t) / (1.0 + z * t);
                        unit(phi.eval(w.arg() + psi))
                    })
                    .collect();
                let cr = (img[3] - img[0]) * (img[2] - img[1]) / ((img[1] - img[0]) * (img[2] - img[3]));
                best = best.max(cr.norm().ln().abs());
            }
        }
    }
    best
}

#[test]
fn cross_ratio_examples() {
    let q = [unit(0.0), unit(FRAC_PI_2), unit(PI), unit(-FRAC_PI_2)];
    let cr = cross_ratio(q[0], q[1], q[2], q[3]).unwrap();
    assert!((cr + 1.0).norm() < 1e-15);
    let one = Complex64::new(1.0, 0.0);
    assert_eq!(
        cross_ratio(one, one, -one, Complex64::new(0.0, -1.0)),
        Err(BoundaryError::DegenerateQuadruple)
    );
}

proptest! {
    #[test]
    fn cross_ratio_is_mobius_invariant(r in 0.0f64..0.9, arg in 0.0f64..TAU, rot in 0.0f64..TAU) {
        let a = Complex64::from_polar(r, arg);
        let m = |z: Complex64| ads_core::disk_mobius(a, rot, z);
        let q = [unit(0.0), unit(FRAC_PI_2), unit(PI), unit(-FRAC_PI_2)].map(m);
        let cr = cross_ratio(q[0], q[1], q[2], q[3]).unwrap();
        prop_assert!((cr + 1.0).norm() < 1e-10);
    }

    #[test]
    fn mobius_maps_have_zero_norm(r in 0.0f64..0.8, arg in 0.0f64..TAU, rot in -1.0f64..1.0) {
        let m = QuasiSymmetricMap::mobius(Complex64::from_polar(r, arg), rot).unwrap();
        prop_assert!(qs_norm_estimate(&m, 256).unwrap().value < 1e-10);
    }

    #[test]
    fn built_in_families_are_acausal(a in 0.01f64..0.3, k in 1u32..=3, s in -1.5f64..1.5, r in 0.0f64..0.5, arg in 0.0f64..TAU) {
        let maps = [
            QuasiSymmetricMap::trig(a, k).unwrap(),
            QuasiSymmetricMap::shear(s).unwrap(),
            QuasiSymmetricMap::mobius(Complex64::from_polar(r, arg), 0.0).unwrap(),
        ];
        for m in &maps {
            let qc = make_quasicircle(m, 256).unwrap();
            prop_assert!(qc.acausal_margin > 0.0);
            prop_assert!(qc.max_abs_profile() < FRAC_PI_2);
        }
    }

    #[test]
    fn interpolant_stays_increasing(steps in proptest::collection::vec(0.05f64..1.0, 8..40), shift in -1.0f64..1.0) {
        let total: f64 = steps.iter().sum();
        let n = steps.len();
        let theta: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let mut phi = Vec::with_capacity(n);
        let mut acc = shift;
        for s in &steps {
            phi.push(acc);
            acc += TAU * s / total;
        }
        let m = QuasiSymmetricMap::from_samples(theta.clone(), phi.clone()).unwrap();
        for (t, p) in theta.iter().zip(&phi) {
            prop_assert!((m.eval(*t) - p).abs() < 1e-12);
        }
        let mut prev = m.eval(0.0);
        for j in 1..=2000 {
            let v = m.eval(TAU * j as f64 / 2000.0);
            prop_assert!(v > prev);
            prev = v;
        }
    }
}

#[test]
fn identity_norm_vanishes() {
    let id = QuasiSymmetricMap::identity();
    for n in [16, 100, 4096] {
        assert!(qs_norm_estimate(&id, n).unwrap().value < 1e-12);
    }
}

/// Brute-force value of the capped norm for `theta + 0.3 sin(theta)` on a
/// 256 x 64 x 32 grid.
const TRIG_03_1_ORACLE: f64 = 0.093_334_376_859_457_09;

#[test]
fn trig_norm_stable_and_pinned() {
    let phi = QuasiSymmetricMap::trig(0.3, 1).unwrap();
    let n4 = qs_norm_estimate(&phi, 4096).unwrap();
    let n8 = qs_norm_estimate(&phi, 8192).unwrap();
    let oracle = brute_force_norm(&phi, 256, 64, 32);
    assert!(n4.value > 0.0);
    assert!(n8.value >= n4.value);
    assert!((n8.value - n4.value) / n8.value < 0.02);
    assert!((n4.value - oracle).abs() / oracle < 0.02);
    assert!((oracle - TRIG_03_1_ORACLE).abs() < 1e-9);
    assert!((n4.value - 0.093_254_283_501_123_84).abs() < 1e-9);
}

#[test]
fn estimate_is_monotone_in_count() {
    let phi = QuasiSymmetricMap::shear(0.7).unwrap();
    let mut prev = 0.0;
    for n in [16, 32, 64, 128, 256, 512, 1024] {
        let v = qs_norm_estimate(&phi, n).unwrap().value;
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn norm_invariant_under_mobius_precomposition() {
    let phi = QuasiSymmetricMap::trig(0.2, 2).unwrap();
    let base = qs_norm_estimate(&phi, 4096).unwrap().value;
    for &(a, rot) in &[(Complex64::new(0.3, 0.0), 0.0), (Complex64::new(-0.1, 0.25), 1.0)] {
        let composed = phi.precompose_mobius(a, rot).unwrap();
        let v = qs_norm_estimate(&composed, 4096).unwrap().value;
        assert!((v - base).abs() / base < 0.02, "{v} vs {base}");
    }
}

#[test]
fn identity_and_rotation_profiles() {
    let qc = make_quasicircle(&QuasiSymmetricMap::identity(), DEFAULT_N_SAMPLES).unwrap();
    assert!(qc.tau.iter().all(|g| *g == 0.0));
    let c = -0.35;
    let rot = QuasiSymmetricMap::mobius(Complex64::new(0.0, 0.0), 2.0 * c).unwrap();
    let qc = make_quasicircle(&rot, DEFAULT_N_SAMPLES).unwrap();
    assert!(qc.tau.iter().all(|g| (g - c).abs() < 1e-14));
}

#[test]
fn trig_profile_matches_dense_evaluation() {
    let a = 0.3;
    let phi = QuasiSymmetricMap::trig(a, 2).unwrap();
    let qc = make_quasicircle(&phi, DEFAULT_N_SAMPLES).unwrap();
    let dense = (0..200_000)
        .map(|i| {
            let t = TAU * i as f64 / 200_000.0;
            0.5 * a * (2.0 * t).sin()
        })
        .fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((qc.max_abs_profile() - dense).abs() / dense < 0.05);
    assert!((dense - 0.5 * a).abs() < 1e-9);
    // closed curve: profile is periodic in alpha
    for k in 0..20 {
        let al = 0.3 * k as f64;
        assert!((qc.profile(al) - qc.profile(al + TAU)).abs() < 1e-13);
        let t = qc.theta_l_at(al);
        assert!((0.5 * (t + phi.eval(t)) - al).abs() < 1e-13);
    }
}

#[test]
fn identity_curve_contains_center_in_domain() {
    let qc = make_quasicircle(&QuasiSymmetricMap::identity(), DEFAULT_N_SAMPLES).unwrap();
    assert!(qc.contains_in_domain(&SpacetimePoint::origin()).unwrap());
    assert!(!qc.contains_in_domain(&SpacetimePoint::new(0.0, 0.0, 0.0, 1.0)).unwrap());
}

#[test]
fn non_monotone_samples_rejected() {
    let theta: Vec<f64> = (0..8).map(|k| TAU * k as f64 / 8.0).collect();
    let mut phi = theta.clone();
    phi[3] = phi[4] + 0.1;
    assert!(matches!(
        QuasiSymmetricMap::from_samples(theta, phi),
        Err(BoundaryError::NotAHomeomorphism { .. })
    ));
}
