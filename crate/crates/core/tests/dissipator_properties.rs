// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use deco_core::dissipator::{algebraic_dissipator, dissipator_order, Coupling, SystemModel, DEFAULT_N_TAU};
use deco_core::grid::FrequencyGrid;
use deco_core::linalg::CMatrix;
use deco_core::ordering::{compare_environments, OrderTolerances, Verdict};
use deco_core::spectral::ThermalReservoirSpec;
use rand::Rng;

#[test]
fn dissipators_are_psd_with_nonnegative_diagonal() {
    let mut rng = common::rng(31);
    for case in 0..12 {
        let d = 2 + case % 3;
        let channels = 1 + case % 2;
        let system = common::system(&mut rng, d, channels);
        let kernel = common::thermal_kernel(&mut rng, channels);
        let t = [0.1, 1.0, 3.0][case % 3];
        let delta = algebraic_dissipator(&system, &kernel, t, 129).unwrap();
        let (lo, hi) = delta.eig_extremes();
        assert!(lo >= -1e-9 * hi, "case {case}: {lo} {hi}");
        assert!(delta.warning.is_none());
        for k in 0..d * d {
            assert!(delta.matrix[(k, k)].re >= -1e-12 * hi);
        }
    }
}

#[test]
fn ordered_kernels_give_ordered_dissipators() {
    let mut rng = common::rng(32);
    let grid = FrequencyGrid::symmetric(50.0, 400).unwrap();
    let tol = OrderTolerances::default();
    for _ in 0..10 {
        let fam = common::family(&mut rng);
        let weak = ThermalReservoirSpec::new(fam, rng.random_range(0.05..0.5), rng.random_range(0.5..3.0), rng.random_range(0.0..1.0)).unwrap();
        let strong = ThermalReservoirSpec::new(
            fam,
            weak.gamma0 * rng.random_range(1.1..3.0),
            weak.cutoff * rng.random_range(1.1..3.0),
            weak.temperature + rng.random_range(0.1..2.0),
        )
        .unwrap();
        let (a, b) = (common::kernel(&strong), common::kernel(&weak));
        assert_eq!(compare_environments(&a, &b, &grid, &tol).unwrap().verdict, Verdict::StrictlyGreater);
        let system = common::system(&mut rng, 2, 1);
        let r = dissipator_order(&system, &a, &b, 1.0, 129, &tol).unwrap();
        assert!(matches!(r.verdict, Verdict::StrictlyGreater | Verdict::Equivalent), "{r:?}");
    }
}

#[test]
fn null_coupling_loses_strictness_but_not_order() {
    let h = CMatrix::from_fn(2, 2, |i, j| num_complex::Complex64::new(if i == j { i as f64 } else { 0.3 }, 0.0));
    let system = SystemModel::new(h, vec![Coupling { matrix: CMatrix::zeros(2, 2), channel: 0 }]).unwrap();
    let hot = common::kernel(&ThermalReservoirSpec::new(deco_core::spectral::CutoffFamily::Drude, 1.0, 5.0, 3.0).unwrap());
    let cold = common::kernel(&ThermalReservoirSpec::new(deco_core::spectral::CutoffFamily::Drude, 1.0, 5.0, 0.5).unwrap());
    let r = dissipator_order(&system, &hot, &cold, 1.0, 33, &OrderTolerances::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Equivalent);
}

#[test]
fn verdict_is_stable_when_quadrature_is_doubled() {
    let mut rng = common::rng(33);
    let tol = OrderTolerances::default();
    for _ in 0..4 {
        let system = common::system(&mut rng, 2, 1);
        let a = common::kernel(&common::thermal_spec(&mut rng));
        let b = common::kernel(&common::thermal_spec(&mut rng));
        let coarse = dissipator_order(&system, &a, &b, 1.0, (DEFAULT_N_TAU - 1) / 2 + 1, &tol).unwrap();
        let fine = dissipator_order(&system, &a, &b, 1.0, DEFAULT_N_TAU, &tol).unwrap();
        assert_eq!(coarse.verdict, fine.verdict);
    }
}
