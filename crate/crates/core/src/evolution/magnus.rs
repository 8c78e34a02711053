// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Second-order Magnus generator Φ₂(t) and the propagator G₀(t)e^{Φ₂(t)}.
//!
//! Φ₂ is the traced double commutator integrated over 0 ≤ τ′ ≤ τ ≤ t. With
//! S_n(τ) = ∫₀^τ Σ_m α_nm(τ,τ′) L_m(τ′) dτ′,
//!
//! ```text
//! Φ₂ρ = Σ_n ∫₀ᵗ [S_n ρ L_n − L_n S_n ρ + L_n ρ S_n† − ρ S_n† L_n](τ) dτ
//! ```
//!
//! The ordered double integral uses trapezoid weights w_k w_k′, halved on the
//! diagonal; the two jump terms then add up to the full-square quadrature of
//! the algebraic dissipator, node for node.

use num_complex::Complex64;

use super::state::{DensityMatrix, Method, Trajectory};
use super::superop::SuperOperator;
use crate::dissipator::{sample_kernel, SystemModel};
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::linalg::{sandwich, CMatrix};
use crate::spectral::{CorrelationKernel, SampledKernel};

fn check_args(t: f64, n_tau: usize) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameters(format!("t must be finite and >= 0 (got {t})")));
    }
    if n_tau < 2 {
        return Err(Error::InvalidParameters(format!("n_tau must be >= 2 (got {n_tau})")));
    }
    Ok(())
}

/// Φ₂(t) with an n_tau-point trapezoid rule per axis.
pub fn magnus_generator(system: &SystemModel, kernel: &CorrelationKernel, t: f64, n_tau: usize) -> Result<SuperOperator> {
    magnus_generator_on(system, kernel, t, n_tau, None)
}

/// As [`magnus_generator`] with an explicit transform grid for stationary kernels.
pub fn magnus_generator_on(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t: f64,
    n_tau: usize,
    freq: Option<&FrequencyGrid>,
) -> Result<SuperOperator> {
    check_args(t, n_tau)?;
    system.check_kernel(kernel)?;
    if t == 0.0 {
        return Ok(SuperOperator::zeros(system.dim()));
    }
    let grid = TimeGrid::span(t, n_tau)?;
    let sampled = sample_kernel(kernel, &grid, freq)?;
    generator_from_samples(system, &sampled)
}

/// Φ₂ from a kernel already sampled on [0, t].
pub fn generator_from_samples(system: &SystemModel, kernel: &SampledKernel) -> Result<SuperOperator> {
    let channels = system.channels();
    if kernel.channels() != channels {
        return Err(Error::KernelSystemMismatch {
            kernel: kernel.channels(),
            system: channels,
        });
    }
    let d = system.dim();
    let grid = kernel.grid();
    let len = grid.count();
    let times = grid.points();
    let w = grid.weights();
    let ops: Vec<Vec<CMatrix>> = (0..channels)
        .map(|n| times.iter().map(|&t| system.interaction_picture_op(n, t)).collect())
        .collect();
    let eye = CMatrix::identity(d, d);
    let mut phi = CMatrix::zeros(d * d, d * d);
    for n in 0..channels {
        for k in 0..len {
            let mut s = CMatrix::zeros(d, d);
            for kp in 0..=k {
                let weight = if kp == k { 0.5 * w[k] * w[kp] } else { w[k] * w[kp] };
                for m in 0..channels {
                    let a: Complex64 = kernel.value(n, m, k, kp) * weight;
                    if a != Complex64::new(0.0, 0.0) {
                        s += ops[m][kp].map(|z| z * a);
                    }
                }
            }
            let l = &ops[n][k];
            let s_dag = s.adjoint();
            phi += sandwich(&s, l);
            phi -= sandwich(&(l * &s), &eye);
            phi += sandwich(l, &s_dag);
            phi -= sandwich(&eye, &(&s_dag * l));
        }
    }
    SuperOperator::new(d, phi)
}

/// The completed map G₀(t)e^{Φ₂(t)} as a superoperator.
pub fn magnus_map(system: &SystemModel, kernel: &CorrelationKernel, t: f64, n_tau: usize) -> Result<SuperOperator> {
    let phi = magnus_generator(system, kernel, t, n_tau)?;
    Ok(SuperOperator::unitary(&system.free_propagator(t)).compose(&phi.exp()?))
}

/// ρ(t) = G₀(t)e^{Φ₂(t)}ρ₀.
pub fn magnus_propagate(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t: f64,
    n_tau: usize,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    if rho0.dim() != system.dim() {
        return Err(Error::InvalidState(format!(
            "initial state has dimension {} but the system {}",
            rho0.dim(),
            system.dim()
        )));
    }
    let phi = magnus_generator(system, kernel, t, n_tau)?;
    let interaction = phi.exp()?.apply(rho0.matrix());
    let u = system.free_propagator(t);
    Ok(DensityMatrix::from_evolved(&(&u * interaction * u.adjoint())))
}

/// Magnus states at t = 0, dt, …, t_span; each checkpoint uses its own Φ₂.
pub fn magnus_trajectory(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t_span: f64,
    dt: f64,
    n_tau: usize,
    rho0: &DensityMatrix,
) -> Result<Trajectory> {
    let steps = super::step_count(t_span, dt)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let t = if j == steps { t_span } else { j as f64 * dt };
        states.push(magnus_propagate(system, kernel, t, n_tau, rho0)?);
        times.push(t);
    }
    Ok(Trajectory {
        method: Method::Magnus,
        times,
        states,
    })
}
