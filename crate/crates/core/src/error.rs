// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by kernel construction, ordering checks and evolution.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("channel collision: {0}")]
    ChannelCollision(String),

    #[error("frequency grid too coarse: estimated quadrature error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("kernel violates Hermiticity alpha(t,s) = alpha^dagger(s,t) by {deviation:.3e}")]
    HermiticityViolation { deviation: f64 },

    #[error("non-Hermitian input: Hermitization changed an entry by {deviation:.3e} (relative)")]
    NonHermitianInput { deviation: f64 },

    #[error("total damping {value:.3e} below floor at omega = {omega}")]
    DampingVanishes { omega: f64, value: f64 },

    #[error("kernel has {kernel} channels but the system couples {system}")]
    KernelSystemMismatch { kernel: usize, system: usize },

    #[error("Lindblad decomposition residual {residual:.3e} exceeds bound {bound:.3e}")]
    DecompositionResidualTooLarge { residual: f64, bound: f64 },

    #[error("matrix exponential did not produce a finite result")]
    ExponentialDivergence,

    #[error("step size too large: half-step deviation {deviation:.3e} exceeds {tolerance:.3e} at t = {time}")]
    StepSizeTooLarge { time: f64, deviation: f64, tolerance: f64 },

    #[error("total Hilbert dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("Fock truncation: mode {mode} has top-level population {population:.3e} at t = {time}")]
    TruncationError { mode: usize, population: f64, time: f64 },

    #[error("invalid system model: {0}")]
    InvalidSystem(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),
}

impl Error {
    /// True for errors caused by malformed or inconsistent inputs rather than
    /// by a numerical failure during the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameters(_)
                | Error::IncompatibleGrids(_)
                | Error::ChannelCollision(_)
                | Error::KernelSystemMismatch { .. }
                | Error::InvalidSystem(_)
                | Error::InvalidState(_)
                | Error::UnsupportedKernel(_)
                | Error::DimensionTooLarge { .. }
                | Error::NonHermitianInput { .. }
                | Error::HermiticityViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
