// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact unitary evolution of system ⊗ truncated oscillator bath.
//!
//! H_total = H ⊗ 1 + 1 ⊗ Σ_k ω_k a_k†a_k + L ⊗ Σ_k g_k (a_k + a_k†), with the
//! bath initially in its (truncated, renormalized) Gibbs state. The factor
//! order is system ⊗ mode_0 ⊗ mode_1 ⊗ ….

use num_complex::Complex64;

use super::state::{DensityMatrix, Method, Trajectory};
use crate::dissipator::SystemModel;
use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, CMatrix};
use crate::spectral::DiscreteBathSpec;

/// Largest total Hilbert dimension handled.
pub const EXACT_DIM_LIMIT: usize = 4096;

/// Largest population allowed on the top Fock level of any mode.
pub const TRUNCATION_POPULATION_LIMIT: f64 = 1e-6;

/// Reduced state at t.
pub fn exact_bath_evolve(
    system: &SystemModel,
    bath: &DiscreteBathSpec,
    t: f64,
    dt: f64,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    Ok(exact_bath_trajectory(system, bath, t, dt, rho0)?.last().clone())
}

/// Reduced states at t = 0, dt, …, t_span; the Fock truncation is checked at
/// every checkpoint.
pub fn exact_bath_trajectory(
    system: &SystemModel,
    bath: &DiscreteBathSpec,
    t_span: f64,
    dt: f64,
    rho0: &DensityMatrix,
) -> Result<Trajectory> {
    bath.validate()?;
    if bath.channel >= system.channels() {
        return Err(Error::KernelSystemMismatch {
            kernel: bath.channel + 1,
            system: system.channels(),
        });
    }
    if rho0.dim() != system.dim() {
        return Err(Error::InvalidState(format!(
            "initial state has dimension {} but the system {}",
            rho0.dim(),
            system.dim()
        )));
    }
    let steps = super::step_count(t_span, dt)?;
    let d = system.dim();
    let levels = bath.fock_truncation;
    let n_modes = bath.modes.len();
    let bath_dim = levels
        .checked_pow(n_modes as u32)
        .filter(|b| b.checked_mul(d).is_some_and(|total| total <= EXACT_DIM_LIMIT));
    let Some(bath_dim) = bath_dim else {
        let dim = (levels as f64).powi(n_modes as i32) * d as f64;
        return Err(Error::DimensionTooLarge {
            dim: if dim < usize::MAX as f64 { dim as usize } else { usize::MAX },
            limit: EXACT_DIM_LIMIT,
        });
    };

    let annihilation = CMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mode_op = |k: usize, local: &CMatrix| -> CMatrix {
        let before = CMatrix::identity(levels.pow(k as u32), levels.pow(k as u32));
        let rest = levels.pow((n_modes - k - 1) as u32);
        kron(&kron(&before, local), &CMatrix::identity(rest, rest))
    };
    let number = annihilation.adjoint() * &annihilation;
    let position = &annihilation + annihilation.adjoint();
    let mut h_bath = CMatrix::zeros(bath_dim, bath_dim);
    let mut coupling = CMatrix::zeros(bath_dim, bath_dim);
    let mut gibbs = CMatrix::identity(1, 1);
    for (k, mode) in bath.modes.iter().enumerate() {
        h_bath += mode_op(k, &number).scale(mode.omega);
        coupling += mode_op(k, &position).scale(mode.coupling);
        gibbs = kron(&gibbs, &thermal_state(mode.omega, bath.temperature, levels));
    }
    let eye_s = CMatrix::identity(d, d);
    let eye_b = CMatrix::identity(bath_dim, bath_dim);
    let h_total = kron(system.hamiltonian(), &eye_b)
        + kron(&eye_s, &h_bath)
        + kron(&system.channel_operator(bath.channel), &coupling);

    let (energies, basis) = eigh(&h_total);
    let rho_total = kron(rho0.matrix(), &gibbs);
    let rho_eigen = basis.adjoint() * rho_total * &basis;
    let total = d * bath_dim;

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let t = if j == steps { t_span } else { j as f64 * dt };
        let evolved_eigen = CMatrix::from_fn(total, total, |a, b| {
            rho_eigen[(a, b)] * Complex64::cis(-(energies[a] - energies[b]) * t)
        });
        let evolved = &basis * evolved_eigen * basis.adjoint();
        check_truncation(&evolved, d, levels, n_modes, t)?;
        let mut reduced = CMatrix::zeros(d, d);
        for i in 0..d {
            for k in 0..d {
                reduced[(i, k)] = (0..bath_dim).map(|b| evolved[(i * bath_dim + b, k * bath_dim + b)]).sum();
            }
        }
        times.push(t);
        states.push(DensityMatrix::from_evolved(&reduced));
    }
    Ok(Trajectory {
        method: Method::Exact,
        times,
        states,
    })
}

/// Truncated Gibbs state of one mode, renormalized.
fn thermal_state(omega: f64, temperature: f64, levels: usize) -> CMatrix {
    let weights: Vec<f64> = (0..levels)
        .map(|n| {
            if temperature > 0.0 {
                (-(n as f64) * omega / temperature).exp()
            } else if n == 0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    CMatrix::from_fn(levels, levels, |i, j| {
        if i == j {
            Complex64::new(weights[i] / z, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn check_truncation(rho: &CMatrix, d: usize, levels: usize, n_modes: usize, t: f64) -> Result<()> {
    let bath_dim = rho.nrows() / d;
    for mode in 0..n_modes {
        let stride = levels.pow((n_modes - mode - 1) as u32);
        let mut population = 0.0;
        for idx in 0..rho.nrows() {
            let b = idx % bath_dim;
            if (b / stride) % levels == levels - 1 {
                population += rho[(idx, idx)].re;
            }
        }
        if population > TRUNCATION_POPULATION_LIMIT {
            return Err(Error::TruncationError { mode, population, time: t });
        }
    }
    Ok(())
}
