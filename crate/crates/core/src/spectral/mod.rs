// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Environment correlation kernels.
//!
//! Units throughout: ħ = k_B = 1, so frequencies, temperatures and inverse
//! times share one unit. The Fourier pair is
//!
//! ```text
//! α̃(ω) = ∫ ds e^{−iωs} α(s),      α(s) = (1/2π) ∫ dω e^{+iωs} α̃(ω)
//! ```
//!
//! which puts the large (emission) weight of a cold thermal reservoir at
//! negative frequency, matching α̃(ω) = γ̃(ω)[κ_T(ω) − ω].

mod kernel;
mod transform;

pub use kernel::{
    composite_correlation, split_noise_dissipation, CorrelationKernel, RealKernel, SampledKernel,
    SpectralLine, SpectralShape, SpectralTerm, StationaryKernel,
};
pub use transform::{correlation_time_domain, inverse_transform, TransformEstimate};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// High-frequency regulator of the damping kernel. Both families have a fixed
/// local limit γ̃(0) = γ0 and grow pointwise with the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffFamily {
    /// γ0 Λ² / (ω² + Λ²)
    Drude,
    /// γ0 exp(−|ω|/Λ)
    ExponentialCutoff,
}

/// A thermal reservoir driving one coupling channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalReservoirSpec {
    pub family: CutoffFamily,
    pub gamma0: f64,
    pub cutoff: f64,
    pub temperature: f64,
    pub channel: usize,
}

impl ThermalReservoirSpec {
    pub fn new(family: CutoffFamily, gamma0: f64, cutoff: f64, temperature: f64) -> Result<Self> {
        let spec = Self {
            family,
            gamma0,
            cutoff,
            temperature,
            channel: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn on_channel(mut self, channel: usize) -> Self {
        self.channel = channel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return Err(Error::InvalidParameters(format!("gamma0 must be > 0 (got {})", self.gamma0)));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::InvalidParameters(format!("cutoff must be > 0 (got {})", self.cutoff)));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "temperature must be >= 0 (got {})",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn damping(&self, omega: f64) -> f64 {
        damping_kernel(omega, self)
    }

    pub fn correlation(&self, omega: f64) -> f64 {
        correlation_freq(omega, self)
    }
}

/// Fluctuation-dissipation kernel κ_T(ω) = ω coth(ω/2T).
///
/// Even in ω and never below |ω|; κ_0(ω) = |ω| and κ_T(0) = 2T.
pub fn fdr_kernel(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return omega.abs();
    }
    if omega == 0.0 {
        return 2.0 * temperature;
    }
    let a = omega.abs();
    a / (a / (2.0 * temperature)).tanh()
}

/// κ_T(ω) − ω = 2ω / (e^{ω/T} − 1), evaluated without cancellation.
pub(crate) fn fdr_excess(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return if omega < 0.0 { -2.0 * omega } else { 0.0 };
    }
    if omega == 0.0 {
        return 2.0 * temperature;
    }
    2.0 * omega / (omega / temperature).exp_m1()
}

/// Damping kernel γ̃(ω) of the reservoir's cutoff family.
pub fn damping_kernel(omega: f64, spec: &ThermalReservoirSpec) -> f64 {
    let lambda = spec.cutoff;
    match spec.family {
        CutoffFamily::Drude => {
            let x = omega / lambda;
            spec.gamma0 / (1.0 + x * x)
        }
        CutoffFamily::ExponentialCutoff => spec.gamma0 * (-omega.abs() / lambda).exp(),
    }
}

/// Thermal correlation in frequency space, α̃(ω) = γ̃(ω)[κ_T(ω) − ω] ≥ 0.
pub fn correlation_freq(omega: f64, spec: &ThermalReservoirSpec) -> f64 {
    damping_kernel(omega, spec) * fdr_excess(omega, spec.temperature)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathMode {
    pub omega: f64,
    pub coupling: f64,
}

/// Finite oscillator bath coupled through l = Σ_k g_k (a_k + a_k†).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBathSpec {
    pub modes: Vec<BathMode>,
    pub temperature: f64,
    pub fock_truncation: usize,
    pub channel: usize,
}

/// Largest neglected thermal occupation tail allowed by a Fock truncation.
pub const FOCK_TAIL_LIMIT: f64 = 1e-8;

impl DiscreteBathSpec {
    pub fn single_mode(omega: f64, coupling: f64, temperature: f64, fock_truncation: usize) -> Result<Self> {
        let spec = Self {
            modes: vec![BathMode { omega, coupling }],
            temperature,
            fock_truncation,
            channel: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParameters("discrete bath needs at least one mode".into()));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "temperature must be >= 0 (got {})",
                self.temperature
            )));
        }
        if self.fock_truncation < 2 {
            return Err(Error::InvalidParameters(format!(
                "fock_truncation must be >= 2 (got {})",
                self.fock_truncation
            )));
        }
        for (k, mode) in self.modes.iter().enumerate() {
            if !(mode.omega > 0.0 && mode.omega.is_finite()) {
                return Err(Error::InvalidParameters(format!("modes[{k}].omega must be > 0")));
            }
            if !mode.coupling.is_finite() {
                return Err(Error::InvalidParameters(format!("modes[{k}].coupling must be finite")));
            }
            let tail = self.thermal_tail(mode.omega);
            if tail >= FOCK_TAIL_LIMIT {
                return Err(Error::InvalidParameters(format!(
                    "fock_truncation {} leaves thermal tail {tail:.3e} >= {FOCK_TAIL_LIMIT:e} for modes[{k}]",
                    self.fock_truncation
                )));
            }
        }
        Ok(())
    }

    /// Thermal probability of occupying level ≥ fock_truncation.
    pub fn thermal_tail(&self, omega: f64) -> f64 {
        if self.temperature <= 0.0 {
            0.0
        } else {
            (-(self.fock_truncation as f64) * omega / self.temperature).exp()
        }
    }
}

/// Mean thermal occupation n(ω) = 1/(e^{ω/T} − 1).
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// Exact correlation α(s) = Σ_k g_k² [coth(ω_k/2T) cos(ω_k s) − i sin(ω_k s)].
pub fn discrete_bath_correlation(spec: &DiscreteBathSpec, s: f64) -> Complex64 {
    spec.modes
        .iter()
        .map(|m| {
            let g2 = m.coupling * m.coupling;
            let coth = fdr_kernel(m.omega, spec.temperature) / m.omega;
            let (sin, cos) = (m.omega * s).sin_cos();
            Complex64::new(g2 * coth * cos, -g2 * sin)
        })
        .sum()
}
