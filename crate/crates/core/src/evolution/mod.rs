// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Reduced dynamics: the second-order master equation, the second-order
//! Magnus propagator, complete-positivity checks and an exact finite-bath
//! oracle.
//!
//! Density matrices are vectorized by column stacking, vec(ρ)[i + j·d] = ρ_ij,
//! so ρ ↦ AρB has the superoperator Bᵀ ⊗ A.

mod exact;
mod magnus;
mod master;
mod state;
mod superop;

pub use exact::{exact_bath_evolve, exact_bath_trajectory, EXACT_DIM_LIMIT, TRUNCATION_POPULATION_LIMIT};
pub use magnus::{
    generator_from_samples, magnus_generator, magnus_generator_on, magnus_map, magnus_propagate, magnus_trajectory,
};
pub use master::{master_equation_evolve, master_equation_evolve_with, MasterOptions};
pub use state::{trace_distance, DensityMatrix, Method, Trajectory, STATE_TOL};
pub use superop::{choi_matrix, SuperOperator};

use crate::error::{Error, Result};

/// Number of `dt` steps in `t_span`; `dt` must divide `t_span`.
pub(crate) fn step_count(t_span: f64, dt: f64) -> Result<usize> {
    if !(t_span > 0.0 && t_span.is_finite()) {
        return Err(Error::InvalidParameters(format!("time span must be > 0 (got {t_span})")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameters(format!("dt must be > 0 (got {dt})")));
    }
    let steps = (t_span / dt).round();
    if steps < 1.0 || (steps * dt - t_span).abs() > 1e-9 * t_span {
        return Err(Error::InvalidParameters(format!("dt = {dt} does not divide the time span {t_span}")));
    }
    Ok(steps as usize)
}
