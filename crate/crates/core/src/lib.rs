// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Decoherence strength of non-Markovian environments.
//!
//! Environments are compared through their correlation kernels α_nm(t,τ):
//! if α_a − α_b is positive definite, every second-order algebraic Lindblad
//! dissipator built from α_a dominates the one built from α_b, for any
//! system and coupling operators. The crate provides
//!
//! - [`spectral`]: thermal, white-noise and discrete-bath kernels, composites,
//!   and the frequency → time transform;
//! - [`ordering`]: positivity checks and the partial order of kernels,
//!   including the two-reservoir cutoff/temperature comparison and the
//!   effective-temperature (FDR) fit;
//! - [`dissipator`]: system models, the algebraic dissipator Δ_IJ(t) and the
//!   Lindblad decomposition of a generator;
//! - [`evolution`]: the second-order master equation, the Magnus propagator
//!   G₀(t)e^{Φ₂(t)}, Choi matrices, trace distance and an exact finite-bath
//!   oracle.

pub mod dissipator;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod linalg;
pub mod ordering;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{FrequencyGrid, TimeGrid, UniformGrid};
