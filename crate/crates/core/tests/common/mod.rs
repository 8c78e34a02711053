// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Random scenario generators shared by the integration tests.

#![allow(dead_code)]

use deco_core::dissipator::{Coupling, SystemModel};
use deco_core::evolution::DensityMatrix;
use deco_core::linalg::{c, hermitize, CMatrix};
use deco_core::spectral::{CorrelationKernel, CutoffFamily, StationaryKernel, ThermalReservoirSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hermitian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> CMatrix {
    let m = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    hermitize(&m).scale(scale)
}

pub fn system(rng: &mut ChaCha8Rng, d: usize, channels: usize) -> SystemModel {
    let h = hermitian(rng, d, 1.0);
    let couplings = (0..channels)
        .map(|channel| Coupling {
            matrix: hermitian(rng, d, 1.0),
            channel,
        })
        .collect();
    SystemModel::new(h, couplings).unwrap()
}

pub fn family(rng: &mut ChaCha8Rng) -> CutoffFamily {
    if rng.random_bool(0.5) {
        CutoffFamily::Drude
    } else {
        CutoffFamily::ExponentialCutoff
    }
}

pub fn thermal_spec(rng: &mut ChaCha8Rng) -> ThermalReservoirSpec {
    ThermalReservoirSpec::new(
        family(rng),
        rng.random_range(0.05..1.0),
        rng.random_range(0.5..8.0),
        rng.random_range(0.0..3.0),
    )
    .unwrap()
}

pub fn kernel(spec: &ThermalReservoirSpec) -> CorrelationKernel {
    StationaryKernel::thermal(spec, 1).unwrap().into()
}

/// Independent thermal reservoirs on each of `channels` channels.
pub fn thermal_kernel(rng: &mut ChaCha8Rng, channels: usize) -> CorrelationKernel {
    let parts: Vec<CorrelationKernel> = (0..channels).map(|_| kernel(&thermal_spec(rng))).collect();
    let map: Vec<Vec<usize>> = (0..channels).map(|n| vec![n]).collect();
    deco_core::spectral::composite_correlation(&parts, &map).unwrap()
}

pub fn state(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = deco_core::linalg::trace(&m).re;
    DensityMatrix::new(hermitize(&m.unscale(tr))).unwrap()
}
