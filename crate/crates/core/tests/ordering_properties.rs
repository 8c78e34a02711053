// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use deco_core::grid::FrequencyGrid;
use deco_core::ordering::{compare_environments, fdr_fit, lutz_compare, OrderTolerances, Verdict};
use deco_core::spectral::{
    composite_correlation, fdr_kernel, CorrelationKernel, CutoffFamily, StationaryKernel, ThermalReservoirSpec,
};
use rand::Rng;

fn opposite(v: Verdict) -> Verdict {
    match v {
        Verdict::StrictlyGreater => Verdict::StrictlyLess,
        Verdict::StrictlyLess => Verdict::StrictlyGreater,
        other => other,
    }
}

#[test]
fn comparison_is_antisymmetric() {
    let mut rng = common::rng(21);
    let grid = FrequencyGrid::symmetric(40.0, 401).unwrap();
    let tol = OrderTolerances::default();
    for _ in 0..100 {
        let a = common::kernel(&common::thermal_spec(&mut rng));
        let b = common::kernel(&common::thermal_spec(&mut rng));
        let ab = compare_environments(&a, &b, &grid, &tol).unwrap();
        let ba = compare_environments(&b, &a, &grid, &tol).unwrap();
        assert_eq!(ba.verdict, opposite(ab.verdict));
        assert_eq!(ab.min_eig_forward, ba.min_eig_backward);
        assert_eq!(ab.min_eig_backward, ba.min_eig_forward);
    }
}

#[test]
fn ordered_thermal_triples_are_transitive() {
    let mut rng = common::rng(22);
    let grid = FrequencyGrid::symmetric(40.0, 401).unwrap();
    let tol = OrderTolerances::default();
    for _ in 0..50 {
        let fam = common::family(&mut rng);
        let mut gamma = rng.random_range(0.05..0.5);
        let mut cutoff = rng.random_range(0.5..4.0);
        let mut temp = rng.random_range(0.0..1.0);
        let mut kernels = Vec::new();
        for _ in 0..3 {
            kernels.push(common::kernel(&ThermalReservoirSpec::new(fam, gamma, cutoff, temp).unwrap()));
            gamma *= rng.random_range(1.0..2.0);
            cutoff *= rng.random_range(1.0..2.0);
            temp += rng.random_range(0.0..1.0);
        }
        // kernels[2] ⪰ kernels[1] ⪰ kernels[0]
        let r21 = compare_environments(&kernels[2], &kernels[1], &grid, &tol).unwrap();
        let r10 = compare_environments(&kernels[1], &kernels[0], &grid, &tol).unwrap();
        let r20 = compare_environments(&kernels[2], &kernels[0], &grid, &tol).unwrap();
        let psd = |r: &deco_core::ordering::OrderResult| r.min_eig_forward >= -1e-9 * r.min_eig_backward.abs().max(1e-300);
        assert!(psd(&r21) && psd(&r10));
        assert!(matches!(r20.verdict, Verdict::StrictlyGreater | Verdict::Equivalent));
        assert!(r20.min_eig_forward >= r21.min_eig_forward.min(0.0) + r10.min_eig_forward.min(0.0) - 1e-12);
    }
}

#[test]
fn doubling_any_kernel_is_strictly_stronger() {
    let mut rng = common::rng(23);
    let grid = FrequencyGrid::symmetric(30.0, 301).unwrap();
    for _ in 0..30 {
        let k = common::kernel(&common::thermal_spec(&mut rng));
        let r = compare_environments(&k.scaled(2.0), &k, &grid, &OrderTolerances::default()).unwrap();
        assert_eq!(r.verdict, Verdict::StrictlyGreater);
    }
    let white: CorrelationKernel = StationaryKernel::white_noise(1.0, 0, 1).unwrap().into();
    let r = compare_environments(&white.scaled(2.0), &white, &grid, &OrderTolerances::default()).unwrap();
    assert_eq!(r.verdict, Verdict::StrictlyGreater);
}

#[test]
fn verdicts_are_stable_under_grid_refinement() {
    let mut rng = common::rng(24);
    let tol = OrderTolerances::default();
    for _ in 0..50 {
        let a = common::kernel(&common::thermal_spec(&mut rng));
        let b = common::kernel(&common::thermal_spec(&mut rng));
        let coarse = compare_environments(&a, &b, &FrequencyGrid::symmetric(50.0, 400).unwrap(), &tol).unwrap();
        let fine = compare_environments(&a, &b, &FrequencyGrid::symmetric(50.0, 800).unwrap(), &tol).unwrap();
        assert_eq!(coarse.verdict, fine.verdict);
    }
}

#[test]
fn lutz_never_reverses() {
    let mut rng = common::rng(25);
    let grid = FrequencyGrid::symmetric(60.0, 601).unwrap();
    let tol = OrderTolerances::default();
    for _ in 0..100 {
        let fam = common::family(&mut rng);
        let low = rng.random_range(0.5..5.0);
        let high = low * rng.random_range(1.0..4.0);
        let cold = rng.random_range(0.0..2.0);
        let hot = cold + rng.random_range(0.0..3.0);
        let r = lutz_compare(rng.random_range(0.1..2.0), high, low, hot, cold, fam, &grid, &tol).unwrap();
        assert!(matches!(r.verdict, Verdict::StrictlyGreater | Verdict::Equivalent), "{r:?}");
    }
}

#[test]
fn mixed_temperature_composite_has_no_effective_temperature() {
    let optical = ThermalReservoirSpec::new(CutoffFamily::Drude, 0.1, 10.0, 8.0).unwrap();
    let mechanical = ThermalReservoirSpec::new(CutoffFamily::Drude, 0.2, 5.0, 0.5).unwrap();
    let parts: Vec<CorrelationKernel> = vec![common::kernel(&optical), common::kernel(&mechanical)];
    let CorrelationKernel::Stationary(composite) = composite_correlation(&parts, &[vec![0], vec![0]]).unwrap() else {
        unreachable!()
    };
    let damping = |w: f64| optical.damping(w) + mechanical.damping(w);
    let grid = FrequencyGrid::symmetric(20.0, 401).unwrap();
    let fit = fdr_fit(&composite, damping, &grid).unwrap();

    // brute-force scan of the same objective
    let omegas = grid.points();
    let kappa: Vec<f64> = omegas.iter().map(|&w| composite.eval(w)[(0, 0)].re / damping(w) + w).collect();
    let scale = kappa.iter().fold(0.0f64, |a, k| a.max(k.abs()));
    let residual = |t: f64| {
        omegas
            .iter()
            .zip(&kappa)
            .map(|(&w, &k)| (k - fdr_kernel(w, t)).abs())
            .fold(0.0, f64::max)
            / scale
    };
    let (best_t, best) = (1..=20000)
        .map(|i| i as f64 * 1e-3)
        .map(|t| (t, residual(t)))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    assert!((fit.t_star - best_t).abs() < 2e-3, "{fit:?} vs scan {best_t}");
    assert!(fit.residual <= best + 1e-9);
    assert!(best > 0.05 && fit.residual > 0.05);
}
