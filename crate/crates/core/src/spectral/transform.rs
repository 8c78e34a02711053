// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Inverse transform α(s) = (1/2π) ∫ dω e^{iωs} α̃(ω) by the trapezoid rule.
//!
//! Because the trapezoid weights are positive, a sampled kernel built from a
//! nonnegative spectrum is an exact positive combination of rank-one Gram
//! matrices, so positivity survives discretization up to round-off.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::kernel::{SampledKernel, SpectralShape, StationaryKernel};
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::linalg::CMatrix;

/// Lags are re-anchored with a direct `cis` every this many recurrence steps.
const REANCHOR: usize = 64;

/// α(p·spacing) for p = 0..n_lags of a scalar spectrum.
pub fn inverse_transform(spectrum: impl Fn(f64) -> f64, freq: &FrequencyGrid, spacing: f64, n_lags: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); n_lags];
    let weights = freq.weights();
    for (j, w) in weights.iter().enumerate() {
        let omega = freq.point(j);
        let coeff = w * spectrum(omega) / (2.0 * PI);
        if coeff == 0.0 {
            continue;
        }
        let step = Complex64::cis(omega * spacing);
        let mut phase = Complex64::new(1.0, 0.0);
        for (p, slot) in acc.iter_mut().enumerate() {
            *slot += phase * coeff;
            let next = p + 1;
            phase = if next % REANCHOR == 0 {
                Complex64::cis(omega * spacing * next as f64)
            } else {
                phase * step
            };
        }
    }
    acc
}

/// Quadrature error estimate of a transform, relative to the kernel scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformEstimate {
    /// Richardson estimate |I_h − I_2h|/3 (absolute).
    pub discretization: f64,
    /// Tail mass beyond the grid edge, (|α̃(−Ω)| + |α̃(Ω)|)·Ω/2π (absolute).
    pub truncation: f64,
    /// max_s ‖α(s)‖ over the sampled lags.
    pub scale: f64,
}

impl TransformEstimate {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            (self.discretization + self.truncation) / self.scale
        } else {
            0.0
        }
    }
}

/// Thermal terms grouped by identical channel coupling, so each group needs
/// only one scalar transform.
fn thermal_groups(kernel: &StationaryKernel) -> Vec<(CMatrix, Vec<(f64, &SpectralShape)>)> {
    let mut groups: Vec<(CMatrix, Vec<(f64, &SpectralShape)>)> = Vec::new();
    for term in kernel.terms() {
        if !matches!(term.shape, SpectralShape::Thermal(_)) {
            continue;
        }
        match groups.iter_mut().find(|(c, _)| *c == term.coupling) {
            Some((_, members)) => members.push((term.scale, &term.shape)),
            None => groups.push((term.coupling.clone(), vec![(term.scale, &term.shape)])),
        }
    }
    groups
}

fn group_density(members: &[(f64, &SpectralShape)], omega: f64) -> f64 {
    members.iter().map(|(scale, shape)| scale * shape.density(omega)).sum()
}

impl StationaryKernel {
    /// Transform grid from the documented heuristic for lags in `[spacing, s_max]`.
    pub fn transform_grid(&self, spacing: f64, s_max: f64) -> Result<FrequencyGrid> {
        FrequencyGrid::for_transform(self.max_temperature(), self.max_cutoff(), spacing, s_max.max(spacing))
    }

    /// Regular part of α(p·spacing), p = 0..n_lags, as N×N matrices. The δ part
    /// is not included. `freq` is required only when thermal terms are present.
    pub fn lag_values(&self, freq: Option<&FrequencyGrid>, spacing: f64, n_lags: usize) -> Result<Vec<CMatrix>> {
        let n = self.channels();
        let mut out = vec![CMatrix::zeros(n, n); n_lags];
        let groups = thermal_groups(self);
        if !groups.is_empty() {
            let freq = freq.ok_or_else(|| {
                Error::InvalidParameters("thermal kernel terms need a frequency grid".into())
            })?;
            if !freq.is_symmetric() {
                return Err(Error::IncompatibleGrids(
                    "inverse transforms need a frequency grid symmetric about 0".into(),
                ));
            }
            for (coupling, members) in &groups {
                let f = inverse_transform(|w| group_density(members, w), freq, spacing, n_lags);
                for (slot, v) in out.iter_mut().zip(&f) {
                    *slot += coupling.map(|c| c * v);
                }
            }
        }
        for term in self.terms() {
            if let SpectralShape::Lines(lines) = &term.shape {
                for (p, slot) in out.iter_mut().enumerate() {
                    let s = p as f64 * spacing;
                    let v: Complex64 = lines
                        .iter()
                        .map(|line| Complex64::cis(line.omega * s) * line.weight)
                        .sum::<Complex64>()
                        * term.scale;
                    *slot += term.coupling.map(|c| c * v);
                }
            }
        }
        Ok(out)
    }

    /// Samples α(t_k − t_l) on `grid`, including the δ part as `c/w_k` on the
    /// diagonal. Uses the heuristic transform grid when `freq` is `None`.
    pub fn sample(&self, grid: &TimeGrid, freq: Option<&FrequencyGrid>) -> Result<SampledKernel> {
        let h = grid.spacing();
        let len = grid.count();
        let auto;
        let freq = match freq {
            Some(f) => Some(f),
            None if self.has_thermal_part() => {
                auto = self.transform_grid(h, h * (len - 1) as f64)?;
                Some(&auto)
            }
            None => None,
        };
        let lags = self.lag_values(freq, h, len)?;
        Ok(assemble(self, grid, &lags))
    }
}

fn assemble(kernel: &StationaryKernel, grid: &TimeGrid, lags: &[CMatrix]) -> SampledKernel {
    let len = grid.count();
    let channels = kernel.channels();
    let delta = kernel.delta_matrix();
    let weights = grid.weights();
    let mut values = CMatrix::zeros(channels * len, channels * len);
    for n in 0..channels {
        for m in 0..channels {
            for k in 0..len {
                for l in 0..len {
                    let mut v = if k >= l {
                        lags[k - l][(n, m)]
                    } else {
                        // α(−s) = α(s)†
                        lags[l - k][(m, n)].conj()
                    };
                    if k == l {
                        v += delta[(n, m)] / weights[k];
                    }
                    values[(n * len + k, m * len + l)] = v;
                }
            }
        }
    }
    SampledKernel::new(*grid, channels, values).expect("dimensions match by construction")
}

/// Time-domain form of a stationary kernel on `s_grid`, with a quadrature
/// error check: fails with `GridTooCoarse` when the estimated error relative
/// to max‖α(s)‖ exceeds `tolerance` (pass `f64::INFINITY` to skip).
pub fn correlation_time_domain(
    kernel: &StationaryKernel,
    s_grid: &TimeGrid,
    freq_grid: &FrequencyGrid,
    tolerance: f64,
) -> Result<SampledKernel> {
    let h = s_grid.spacing();
    let len = s_grid.count();
    let lags = kernel.lag_values(Some(freq_grid), h, len)?;
    if tolerance.is_finite() {
        let estimate = estimate_error(kernel, freq_grid, h, len, &lags);
        let relative = estimate.relative();
        if relative > tolerance {
            return Err(Error::GridTooCoarse {
                estimate: relative,
                tolerance,
            });
        }
    }
    Ok(assemble(kernel, s_grid, &lags))
}

fn matrix_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Error estimate for the thermal (numerically transformed) part.
pub(crate) fn estimate_error(
    kernel: &StationaryKernel,
    freq: &FrequencyGrid,
    spacing: f64,
    n_lags: usize,
    lags: &[CMatrix],
) -> TransformEstimate {
    let scale = lags.iter().map(matrix_norm).fold(0.0, f64::max);
    let mut discretization = 0.0;
    let mut truncation = 0.0;
    let omega_max = freq.max();
    for (coupling, members) in thermal_groups(kernel) {
        let weight = matrix_norm(&coupling);
        let density = |w: f64| group_density(&members, w);
        if let Some(coarse) = freq.coarsened() {
            let fine = inverse_transform(density, freq, spacing, n_lags);
            let rough = inverse_transform(density, &coarse, spacing, n_lags);
            let d = fine
                .iter()
                .zip(&rough)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            discretization += weight * d / 3.0;
        }
        let edge = density(-omega_max).abs() + density(omega_max).abs();
        truncation += weight * edge * omega_max / (2.0 * PI);
    }
    TransformEstimate {
        discretization,
        truncation,
        scale,
    }
}
