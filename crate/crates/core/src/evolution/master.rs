// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Second-order (time-local) master equation
//!
//! ```text
//! ρ̇ = −i[H,ρ] + Σ_n [L_n, ρ M_n(t)† − M_n(t) ρ],
//! M_n(t) = Σ_m ∫₀ᵗ α_nm(s) e^{−iHs} L_m e^{iHs} ds,
//! ```
//!
//! integrated with classical RK4. The memory operators are tabulated once by
//! cumulative trapezoid quadrature on a grid of spacing dt/4, which contains
//! every stage time of a full step and of the two half steps used for the
//! step-size check. A δ part c·δ(s) contributes c/2·L for every t ≥ 0.

use super::state::{DensityMatrix, Method, Trajectory};
use crate::dissipator::SystemModel;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::linalg::{hermitize, max_abs, CMatrix, I};
use crate::spectral::CorrelationKernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterOptions {
    /// Largest entrywise difference allowed between one step of dt and two
    /// steps of dt/2.
    pub check_tolerance: f64,
    /// Transform grid for thermal kernels; heuristic when `None`.
    pub freq: Option<FrequencyGrid>,
}

impl Default for MasterOptions {
    fn default() -> Self {
        Self {
            check_tolerance: 1e-6,
            freq: None,
        }
    }
}

pub fn master_equation_evolve(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t_span: f64,
    dt: f64,
    rho0: &DensityMatrix,
) -> Result<Trajectory> {
    master_equation_evolve_with(system, kernel, t_span, dt, rho0, &MasterOptions::default())
}

pub fn master_equation_evolve_with(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t_span: f64,
    dt: f64,
    rho0: &DensityMatrix,
    options: &MasterOptions,
) -> Result<Trajectory> {
    let CorrelationKernel::Stationary(stationary) = kernel else {
        return Err(Error::UnsupportedKernel(
            "the master equation needs a stationary kernel; sampled kernels do not define α(s) beyond their window"
                .into(),
        ));
    };
    system.check_kernel(kernel)?;
    if rho0.dim() != system.dim() {
        return Err(Error::InvalidState(format!(
            "initial state has dimension {} but the system {}",
            rho0.dim(),
            system.dim()
        )));
    }
    let steps = super::step_count(t_span, dt)?;
    let q = dt / 4.0;
    let nodes = 4 * steps + 1;

    let auto;
    let freq = match options.freq.as_ref() {
        Some(f) => Some(f),
        None if stationary.has_thermal_part() => {
            auto = stationary.transform_grid(q, t_span)?;
            Some(&auto)
        }
        None => None,
    };
    let lags = stationary.lag_values(freq, q, nodes)?;
    let memory = memory_operators(system, &lags, &stationary.delta_matrix(), q);

    let h = system.hamiltonian();
    let couplings: Vec<CMatrix> = (0..system.channels()).map(|n| system.channel_operator(n)).collect();
    let rhs = |rho: &CMatrix, node: usize| -> CMatrix {
        let mut out = (h * rho - rho * h) * (-I);
        for (l, m) in couplings.iter().zip(&memory[node]) {
            let x = rho * m.adjoint() - m * rho;
            out += l * &x - &x * l;
        }
        out
    };
    let rk4 = |rho: &CMatrix, node: usize, stride: usize, step: f64| -> CMatrix {
        let k1 = rhs(rho, node);
        let k2 = rhs(&(rho + k1.scale(0.5 * step)), node + stride / 2);
        let k3 = rhs(&(rho + k2.scale(0.5 * step)), node + stride / 2);
        let k4 = rhs(&(rho + k3.scale(step)), node + stride);
        rho + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(step / 6.0)
    };

    let mut rho = rho0.matrix().clone();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    for j in 0..steps {
        let node = 4 * j;
        let full = rk4(&rho, node, 4, dt);
        let half = rk4(&rk4(&rho, node, 2, 0.5 * dt), node + 2, 2, 0.5 * dt);
        let deviation = max_abs(&(&full - &half));
        let t = if j + 1 == steps { t_span } else { (j + 1) as f64 * dt };
        if !(deviation <= options.check_tolerance) {
            return Err(Error::StepSizeTooLarge {
                time: t,
                deviation,
                tolerance: options.check_tolerance,
            });
        }
        rho = hermitize(&full);
        times.push(t);
        states.push(DensityMatrix::from_evolved(&rho));
    }
    Ok(Trajectory {
        method: Method::Master,
        times,
        states,
    })
}

/// M_n at every node p·q, p = 0..lags.len().
fn memory_operators(system: &SystemModel, lags: &[CMatrix], delta: &CMatrix, q: f64) -> Vec<Vec<CMatrix>> {
    let d = system.dim();
    let channels = system.channels();
    let integrand = |p: usize| -> Vec<CMatrix> {
        let s = p as f64 * q;
        let ops: Vec<CMatrix> = (0..channels).map(|m| system.interaction_picture_op(m, -s)).collect();
        (0..channels)
            .map(|n| {
                (0..channels).fold(CMatrix::zeros(d, d), |acc, m| {
                    let a = lags[p][(n, m)];
                    acc + ops[m].map(|z| z * a)
                })
            })
            .collect()
    };
    let base: Vec<CMatrix> = (0..channels)
        .map(|n| {
            (0..channels).fold(CMatrix::zeros(d, d), |acc, m| {
                let a = delta[(n, m)] * 0.5;
                acc + system.channel_operator(m).map(|z| z * a)
            })
        })
        .collect();
    let mut out = Vec::with_capacity(lags.len());
    out.push(base);
    let mut previous = integrand(0);
    for p in 1..lags.len() {
        let current = integrand(p);
        let next: Vec<CMatrix> = out[p - 1]
            .iter()
            .zip(previous.iter().zip(&current))
            .map(|(acc, (a, b))| acc + (a + b).scale(0.5 * q))
            .collect();
        out.push(next);
        previous = current;
    }
    out
}
