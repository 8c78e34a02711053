// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{bose_occupation, correlation_freq, DiscreteBathSpec, ThermalReservoirSpec};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{hermiticity_deviation, CMatrix};

/// Relative Hermiticity slack accepted for sampled kernels.
pub const HERMITICITY_TOL: f64 = 1e-8;

/// A spectral atom: contributes `weight · e^{iωs}` to α(s), i.e. a delta
/// line of mass 2π·weight at `omega` in α̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub omega: f64,
    pub weight: f64,
}

/// Scalar spectral profile of one kernel term.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralShape {
    /// α̃(ω) = γ̃(ω)[κ_T(ω) − ω]
    Thermal(ThermalReservoirSpec),
    /// α̃(ω) ≡ c, α(s) = c δ(s)
    White { strength: f64 },
    /// Finite set of spectral atoms (exact discrete bath).
    Lines(Vec<SpectralLine>),
}

impl SpectralShape {
    /// Continuous spectral density at ω (atoms excluded).
    pub fn density(&self, omega: f64) -> f64 {
        match self {
            SpectralShape::Thermal(spec) => correlation_freq(omega, spec),
            SpectralShape::White { strength } => *strength,
            SpectralShape::Lines(_) => 0.0,
        }
    }
}

/// One term α̃(ω) ⊇ scale · shape(ω) · coupling, with `coupling` an N×N
/// Hermitian positive semidefinite channel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTerm {
    pub scale: f64,
    pub coupling: CMatrix,
    pub shape: SpectralShape,
}

/// Time-translation-invariant kernel, stored in the frequency domain as a
/// signed sum of terms so that differences and composites stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryKernel {
    channels: usize,
    terms: Vec<SpectralTerm>,
}

fn unit_block(channels: usize, channel: usize) -> CMatrix {
    let mut m = CMatrix::zeros(channels, channels);
    m[(channel, channel)] = Complex64::new(1.0, 0.0);
    m
}

impl StationaryKernel {
    pub fn zero(channels: usize) -> Self {
        Self {
            channels,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(channels: usize, terms: Vec<SpectralTerm>) -> Result<Self> {
        for (k, term) in terms.iter().enumerate() {
            if term.coupling.nrows() != channels || term.coupling.ncols() != channels {
                return Err(Error::InvalidParameters(format!(
                    "term {k} coupling is {}x{}, expected {channels}x{channels}",
                    term.coupling.nrows(),
                    term.coupling.ncols()
                )));
            }
            if hermiticity_deviation(&term.coupling) > HERMITICITY_TOL {
                return Err(Error::HermiticityViolation {
                    deviation: hermiticity_deviation(&term.coupling),
                });
            }
        }
        Ok(Self { channels, terms })
    }

    /// Thermal reservoir on `spec.channel` of an `channels`-channel space.
    pub fn thermal(spec: &ThermalReservoirSpec, channels: usize) -> Result<Self> {
        spec.validate()?;
        check_channel(spec.channel, channels)?;
        Ok(Self {
            channels,
            terms: vec![SpectralTerm {
                scale: 1.0,
                coupling: unit_block(channels, spec.channel),
                shape: SpectralShape::Thermal(*spec),
            }],
        })
    }

    /// Scalar white noise α(t,τ) = c δ(t−τ) on one channel.
    pub fn white_noise(strength: f64, channel: usize, channels: usize) -> Result<Self> {
        if !(strength >= 0.0 && strength.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "white-noise strength must be >= 0 (got {strength})"
            )));
        }
        check_channel(channel, channels)?;
        Ok(Self {
            channels,
            terms: vec![SpectralTerm {
                scale: 1.0,
                coupling: unit_block(channels, channel),
                shape: SpectralShape::White { strength },
            }],
        })
    }

    /// Spectral representation of a finite oscillator bath: weight g²(n+1) at
    /// −ω_k and g²n at +ω_k, so that α(s) = Σ g²[(n+1)e^{−iω_k s} + n e^{iω_k s}].
    pub fn discrete_bath(spec: &DiscreteBathSpec, channels: usize) -> Result<Self> {
        spec.validate()?;
        check_channel(spec.channel, channels)?;
        let mut lines = Vec::with_capacity(2 * spec.modes.len());
        for mode in &spec.modes {
            let g2 = mode.coupling * mode.coupling;
            let n = bose_occupation(mode.omega, spec.temperature);
            lines.push(SpectralLine {
                omega: -mode.omega,
                weight: g2 * (n + 1.0),
            });
            if n > 0.0 {
                lines.push(SpectralLine {
                    omega: mode.omega,
                    weight: g2 * n,
                });
            }
        }
        Ok(Self {
            channels,
            terms: vec![SpectralTerm {
                scale: 1.0,
                coupling: unit_block(channels, spec.channel),
                shape: SpectralShape::Lines(lines),
            }],
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn terms(&self) -> &[SpectralTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Continuous part of α̃(ω) as an N×N Hermitian matrix.
    pub fn eval(&self, omega: f64) -> CMatrix {
        let mut m = CMatrix::zeros(self.channels, self.channels);
        for term in &self.terms {
            let v = term.scale * term.shape.density(omega);
            if v != 0.0 {
                m += term.coupling.scale(v);
            }
        }
        m
    }

    /// Spectral atoms aggregated per frequency, ascending.
    pub fn atoms(&self) -> Vec<(f64, CMatrix)> {
        let mut atoms: Vec<(f64, CMatrix)> = Vec::new();
        for term in &self.terms {
            if let SpectralShape::Lines(lines) = &term.shape {
                for line in lines {
                    let block = term.coupling.scale(term.scale * line.weight);
                    match atoms.iter_mut().find(|(w, _)| *w == line.omega) {
                        Some((_, m)) => *m += block,
                        None => atoms.push((line.omega, block)),
                    }
                }
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms
    }

    /// Coefficient matrix of the δ(t−τ) part.
    pub fn delta_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.channels, self.channels);
        for term in &self.terms {
            if let SpectralShape::White { strength } = term.shape {
                m += term.coupling.scale(term.scale * strength);
            }
        }
        m
    }

    /// Whether any term needs a numerical inverse transform.
    pub fn has_thermal_part(&self) -> bool {
        self.terms
            .iter()
            .any(|t| matches!(t.shape, SpectralShape::Thermal(_)))
    }

    pub fn max_temperature(&self) -> f64 {
        self.thermal_specs().map(|s| s.temperature).fold(0.0, f64::max)
    }

    pub fn max_cutoff(&self) -> f64 {
        self.thermal_specs().map(|s| s.cutoff).fold(0.0, f64::max)
    }

    fn thermal_specs(&self) -> impl Iterator<Item = &ThermalReservoirSpec> {
        self.terms.iter().filter_map(|t| match &t.shape {
            SpectralShape::Thermal(spec) => Some(spec),
            _ => None,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            channels: self.channels,
            terms: self
                .terms
                .iter()
                .map(|t| SpectralTerm {
                    scale: t.scale * factor,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.channels != other.channels {
            return Err(Error::IncompatibleGrids(format!(
                "channel spaces differ ({} vs {})",
                self.channels, other.channels
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            channels: self.channels,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Re-index channels into a larger space: channel c of `self` becomes `map[c]`.
    fn embed(&self, map: &[usize], channels: usize) -> Self {
        Self {
            channels,
            terms: self
                .terms
                .iter()
                .map(|t| SpectralTerm {
                    coupling: embed_block(&t.coupling, map, channels),
                    ..t.clone()
                })
                .collect(),
        }
    }
}

fn check_channel(channel: usize, channels: usize) -> Result<()> {
    if channel >= channels {
        return Err(Error::InvalidParameters(format!(
            "channel {channel} outside a {channels}-channel space"
        )));
    }
    Ok(())
}

fn embed_block(block: &CMatrix, map: &[usize], channels: usize) -> CMatrix {
    let mut out = CMatrix::zeros(channels, channels);
    for (a, &ma) in map.iter().enumerate() {
        for (b, &mb) in map.iter().enumerate() {
            out[(ma, mb)] += block[(a, b)];
        }
    }
    out
}

/// A kernel sampled on a time grid, stored as the block Gram matrix
/// `M[(n,k),(m,l)] = α_nm(t_k, t_l)` with row index `n·len + k`.
///
/// Singular δ(t−τ) parts are stored as `c / w_k` on the diagonal, where
/// `w_k` is the trapezoid weight, so that quadrature with the grid weights
/// reproduces ∫∫ f(t) c δ(t−τ) g(τ) = c ∫ f g.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledKernel {
    grid: TimeGrid,
    channels: usize,
    values: CMatrix,
}

impl SampledKernel {
    pub fn new(grid: TimeGrid, channels: usize, values: CMatrix) -> Result<Self> {
        let size = channels * grid.count();
        if values.nrows() != size || values.ncols() != size {
            return Err(Error::InvalidParameters(format!(
                "sampled kernel must be {size}x{size}, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        Ok(Self {
            grid,
            channels,
            values,
        })
    }

    /// Samples `f(n, m, t_k, t_l)` on every block.
    pub fn from_fn(
        grid: TimeGrid,
        channels: usize,
        f: impl Fn(usize, usize, f64, f64) -> Complex64,
    ) -> Self {
        let len = grid.count();
        let times = grid.points();
        let values = CMatrix::from_fn(channels * len, channels * len, |r, c| {
            f(r / len, c / len, times[r % len], times[c % len])
        });
        Self {
            grid,
            channels,
            values,
        }
    }

    /// Discretized c δ(t−τ) on one channel.
    pub fn white_noise(grid: TimeGrid, strength: f64, channel: usize, channels: usize) -> Result<Self> {
        check_channel(channel, channels)?;
        let len = grid.count();
        let mut values = CMatrix::zeros(channels * len, channels * len);
        for k in 0..len {
            let idx = channel * len + k;
            values[(idx, idx)] = Complex64::new(strength / grid.weight(k), 0.0);
        }
        Ok(Self {
            grid,
            channels,
            values,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.grid.count()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, channel: usize, k: usize) -> usize {
        channel * self.grid.count() + k
    }

    /// α_nm(t_k, t_l)
    pub fn value(&self, n: usize, m: usize, k: usize, l: usize) -> Complex64 {
        self.values[(self.index(n, k), self.index(m, l))]
    }

    pub fn gram(&self) -> &CMatrix {
        &self.values
    }

    pub fn into_gram(self) -> CMatrix {
        self.values
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::IncompatibleGrids(format!(
                "time grids differ ({:?} vs {:?})",
                self.grid, other.grid
            )));
        }
        if self.channels != other.channels {
            return Err(Error::IncompatibleGrids(format!(
                "channel spaces differ ({} vs {})",
                self.channels, other.channels
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            values: &self.values + &other.values,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            values: &self.values - &other.values,
            ..self.clone()
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.scale(factor),
            ..self.clone()
        }
    }

    fn embed(&self, map: &[usize], channels: usize) -> Self {
        let len = self.grid.count();
        let mut values = CMatrix::zeros(channels * len, channels * len);
        for (a, &ma) in map.iter().enumerate() {
            for (b, &mb) in map.iter().enumerate() {
                for k in 0..len {
                    for l in 0..len {
                        values[(ma * len + k, mb * len + l)] += self.values[(a * len + k, b * len + l)];
                    }
                }
            }
        }
        Self {
            grid: self.grid,
            channels,
            values,
        }
    }

    /// Largest relative violation of α(t,τ) = α†(τ,t).
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.values)
    }
}

/// Multivariate environment correlation α_nm.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationKernel {
    Stationary(StationaryKernel),
    Sampled(SampledKernel),
}

impl From<StationaryKernel> for CorrelationKernel {
    fn from(k: StationaryKernel) -> Self {
        CorrelationKernel::Stationary(k)
    }
}

impl From<SampledKernel> for CorrelationKernel {
    fn from(k: SampledKernel) -> Self {
        CorrelationKernel::Sampled(k)
    }
}

impl CorrelationKernel {
    pub fn channels(&self) -> usize {
        match self {
            CorrelationKernel::Stationary(k) => k.channels(),
            CorrelationKernel::Sampled(k) => k.channels(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            CorrelationKernel::Stationary(k) => k.scaled(factor).into(),
            CorrelationKernel::Sampled(k) => k.scaled(factor).into(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (CorrelationKernel::Stationary(a), CorrelationKernel::Stationary(b)) => Ok(a.add(b)?.into()),
            (CorrelationKernel::Sampled(a), CorrelationKernel::Sampled(b)) => Ok(a.add(b)?.into()),
            _ => Err(Error::IncompatibleGrids(
                "cannot combine stationary and sampled kernels".into(),
            )),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }
}

/// Sum of independent environments. `channel_map[p][c]` is the composite
/// channel receiving channel `c` of `parts[p]`.
pub fn composite_correlation(parts: &[CorrelationKernel], channel_map: &[Vec<usize>]) -> Result<CorrelationKernel> {
    if parts.is_empty() {
        return Err(Error::InvalidParameters("composite needs at least one part".into()));
    }
    if parts.len() != channel_map.len() {
        return Err(Error::InvalidParameters(format!(
            "{} parts but {} channel maps",
            parts.len(),
            channel_map.len()
        )));
    }
    for (p, (part, map)) in parts.iter().zip(channel_map).enumerate() {
        if map.len() != part.channels() {
            return Err(Error::ChannelCollision(format!(
                "part {p} has {} channels but its map lists {}",
                part.channels(),
                map.len()
            )));
        }
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != map.len() {
            return Err(Error::ChannelCollision(format!(
                "part {p} maps two of its channels onto the same composite channel"
            )));
        }
    }
    let channels = channel_map
        .iter()
        .flat_map(|m| m.iter().copied())
        .max()
        .map_or(0, |m| m + 1);

    let mut iter = parts.iter().zip(channel_map);
    let (first, first_map) = iter.next().expect("non-empty");
    let mut total: CorrelationKernel = match first {
        CorrelationKernel::Stationary(k) => k.embed(first_map, channels).into(),
        CorrelationKernel::Sampled(k) => k.embed(first_map, channels).into(),
    };
    for (part, map) in iter {
        let embedded: CorrelationKernel = match part {
            CorrelationKernel::Stationary(k) => k.embed(map, channels).into(),
            CorrelationKernel::Sampled(k) => k.embed(map, channels).into(),
        };
        total = total.add(&embedded)?;
    }
    Ok(total)
}

/// Real kernel on a time grid (same block layout as [`SampledKernel`]).
#[derive(Debug, Clone, PartialEq)]
pub struct RealKernel {
    pub grid: TimeGrid,
    pub channels: usize,
    pub values: DMatrix<f64>,
}

/// α = ν + iμ with ν the (real, symmetric) noise kernel and μ the (real,
/// antisymmetric) dissipation kernel.
pub fn split_noise_dissipation(kernel: &SampledKernel) -> Result<(RealKernel, RealKernel)> {
    let deviation = kernel.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::HermiticityViolation { deviation });
    }
    let noise = kernel.gram().map(|z| z.re);
    let dissipation = kernel.gram().map(|z| z.im);
    Ok((
        RealKernel {
            grid: *kernel.grid(),
            channels: kernel.channels(),
            values: noise,
        },
        RealKernel {
            grid: *kernel.grid(),
            channels: kernel.channels(),
            values: dissipation,
        },
    ))
}
