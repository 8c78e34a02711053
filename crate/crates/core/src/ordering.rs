// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Positivity of correlation kernels and the partial order of decoherence
//! strength.
//!
//! Stationary kernels are checked frequency by frequency: a stationary kernel
//! is positive on every time grid exactly when α̃(ω) ⪰ 0 for every ω, so the
//! verdict never depends on transform error. Sampled kernels are checked
//! through their block Gram matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::linalg::{eigh, CMatrix};
use crate::spectral::{CorrelationKernel, CutoffFamily, SampledKernel, StationaryKernel, ThermalReservoirSpec};

/// Denominator floor for relative PSD tests.
pub const SCALE_FLOOR: f64 = 1e-300;

/// Where an eigenvalue extreme was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridPoint {
    /// Continuous spectrum at a frequency node.
    Frequency { index: usize, omega: f64 },
    /// A spectral atom (discrete bath line).
    Atom { omega: f64 },
    /// Dominant (channel, time) component of the extreme Gram eigenvector.
    Time { channel: usize, index: usize, time: f64 },
    /// Dominant pair index I of the extreme dissipator eigenvector.
    Pair { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridDescription {
    Frequency { min: f64, max: f64, count: usize },
    Time { min: f64, max: f64, count: usize },
    Dissipator { dim: usize },
}

impl From<&FrequencyGrid> for GridDescription {
    fn from(g: &FrequencyGrid) -> Self {
        GridDescription::Frequency {
            min: g.min(),
            max: g.max(),
            count: g.count(),
        }
    }
}

impl From<&TimeGrid> for GridDescription {
    fn from(g: &TimeGrid) -> Self {
        GridDescription::Time {
            min: g.grid().min,
            max: g.grid().max,
            count: g.count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub worst_point: GridPoint,
    pub grid: GridDescription,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    StrictlyGreater,
    StrictlyLess,
    Equivalent,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderTolerances {
    /// PSD floor: a difference counts as PSD when its minimum eigenvalue is ≥ −tol_rel·scale.
    pub tol_rel: f64,
    /// Both difference extremes below equivalence·scale ⇒ Equivalent.
    pub equivalence: f64,
    /// Strict dominance needs a difference eigenvalue above strictness·scale.
    pub strictness: f64,
}

impl Default for OrderTolerances {
    fn default() -> Self {
        Self {
            tol_rel: 1e-9,
            equivalence: 1e-12,
            strictness: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstPoints {
    pub forward: GridPoint,
    pub backward: GridPoint,
}

/// Outcome of comparing a against b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderResult {
    pub verdict: Verdict,
    /// Minimum eigenvalue of a − b over the grid.
    pub min_eig_forward: f64,
    /// Minimum eigenvalue of b − a over the grid.
    pub min_eig_backward: f64,
    pub worst_point: WorstPoints,
    pub tolerances: OrderTolerances,
}

/// Worst point of a Gram eigenvector: its largest-magnitude component.
fn dominant_component(v: nalgebra::DVectorView<'_, num_complex::Complex64>) -> usize {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_abs {
            best_abs = z.norm();
            best = i;
        }
    }
    best
}

/// Eigenvalue extremes of a Hermitian matrix with the dominant components of
/// the extreme eigenvectors.
fn extremes_with_vectors(m: &CMatrix) -> (f64, usize, f64, usize) {
    let (values, vectors) = eigh(m);
    let last = values.len() - 1;
    (
        values[0],
        dominant_component(vectors.column(0)),
        values[last],
        dominant_component(vectors.column(last)),
    )
}

fn time_point(grid: &TimeGrid, idx: usize) -> GridPoint {
    let len = grid.count();
    GridPoint::Time {
        channel: idx / len,
        index: idx % len,
        time: grid.point(idx % len),
    }
}

/// Positivity of a kernel in the sense ∫∫ f†(t) α(t,τ) f(τ) ≥ 0.
///
/// Stationary kernels are tested on `grid` (plus their spectral atoms);
/// sampled kernels carry their own time grid and ignore `grid`.
pub fn check_kernel_positive(kernel: &CorrelationKernel, grid: &FrequencyGrid, tol_rel: f64) -> Result<PositivityReport> {
    match kernel {
        CorrelationKernel::Stationary(k) => Ok(check_stationary(k, grid, tol_rel)),
        CorrelationKernel::Sampled(k) => check_sampled(k, tol_rel),
    }
}

fn is_psd(min: f64, max: f64, tol_rel: f64) -> bool {
    min >= -tol_rel * max.abs().max(SCALE_FLOOR)
}

fn check_stationary(kernel: &StationaryKernel, grid: &FrequencyGrid, tol_rel: f64) -> PositivityReport {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut worst = GridPoint::Frequency {
        index: 0,
        omega: grid.point(0),
    };
    for (point, m) in stationary_points(kernel, grid) {
        let (lo, _, hi, _) = extremes_with_vectors(&m);
        if lo < min {
            min = lo;
            worst = point;
        }
        max = max.max(hi);
    }
    PositivityReport {
        is_psd: is_psd(min, max, tol_rel),
        min_eigenvalue: min,
        max_eigenvalue: max,
        worst_point: worst,
        grid: grid.into(),
    }
}

fn stationary_points(kernel: &StationaryKernel, grid: &FrequencyGrid) -> Vec<(GridPoint, CMatrix)> {
    let mut out: Vec<(GridPoint, CMatrix)> = grid
        .points()
        .into_iter()
        .enumerate()
        .map(|(index, omega)| (GridPoint::Frequency { index, omega }, kernel.eval(omega)))
        .collect();
    out.extend(
        kernel
            .atoms()
            .into_iter()
            .map(|(omega, m)| (GridPoint::Atom { omega }, m)),
    );
    out
}

fn check_sampled(kernel: &SampledKernel, tol_rel: f64) -> Result<PositivityReport> {
    let deviation = kernel.hermiticity_deviation();
    if deviation > 1e-8 {
        return Err(Error::NonHermitianInput { deviation });
    }
    let (min, min_idx, max, _) = extremes_with_vectors(kernel.gram());
    Ok(PositivityReport {
        is_psd: is_psd(min, max, tol_rel),
        min_eigenvalue: min,
        max_eigenvalue: max,
        worst_point: time_point(kernel.grid(), min_idx),
        grid: kernel.grid().into(),
    })
}

/// Order two families of Hermitian matrices point by point. `points` holds
/// (location, A_p, B_p). Shared by kernel and dissipator comparisons.
pub(crate) fn order_pointwise(
    points: &[(GridPoint, CMatrix, CMatrix)],
    locate: impl Fn(&GridPoint, usize) -> GridPoint,
    tol: &OrderTolerances,
) -> OrderResult {
    let mut scale = 0.0f64;
    let mut min_f = f64::INFINITY;
    let mut max_f = f64::NEG_INFINITY;
    let mut fwd_point = points[0].0;
    let mut bwd_point = points[0].0;
    for (point, a, b) in points {
        let (a_lo, _, a_hi, _) = extremes_with_vectors(a);
        let (b_lo, _, b_hi, _) = extremes_with_vectors(b);
        scale = scale.max(a_lo.abs()).max(a_hi.abs()).max(b_lo.abs()).max(b_hi.abs());

        // Both orientations are solved so that swapping a and b negates the
        // witnesses exactly.
        let (d_lo, d_lo_idx, d_hi, d_hi_idx) = extremes_with_vectors(&(a - b));
        let (r_lo, r_lo_idx, r_hi, r_hi_idx) = extremes_with_vectors(&(b - a));
        let (lo, lo_idx) = if d_lo <= -r_hi { (d_lo, d_lo_idx) } else { (-r_hi, r_hi_idx) };
        let (hi, hi_idx) = if d_hi >= -r_lo { (d_hi, d_hi_idx) } else { (-r_lo, r_lo_idx) };
        if lo < min_f {
            min_f = lo;
            fwd_point = locate(point, lo_idx);
        }
        if hi > max_f {
            max_f = hi;
            bwd_point = locate(point, hi_idx);
        }
    }
    let scale = scale.max(SCALE_FLOOR);
    let min_b = -max_f;
    let forward_psd = min_f >= -tol.tol_rel * scale;
    let backward_psd = min_b >= -tol.tol_rel * scale;
    let verdict = if min_f.abs() <= tol.equivalence * scale && max_f.abs() <= tol.equivalence * scale {
        Verdict::Equivalent
    } else {
        match (forward_psd, backward_psd) {
            (true, false) if max_f > tol.strictness * scale => Verdict::StrictlyGreater,
            (false, true) if -min_f > tol.strictness * scale => Verdict::StrictlyLess,
            (true, _) | (_, true) => Verdict::Equivalent,
            (false, false) => Verdict::Incomparable,
        }
    };
    OrderResult {
        verdict,
        min_eig_forward: min_f,
        min_eig_backward: min_b,
        worst_point: WorstPoints {
            forward: fwd_point,
            backward: bwd_point,
        },
        tolerances: *tol,
    }
}

/// Compare the decoherence strength of two environments.
pub fn compare_environments(
    a: &CorrelationKernel,
    b: &CorrelationKernel,
    grid: &FrequencyGrid,
    tol: &OrderTolerances,
) -> Result<OrderResult> {
    if a.channels() != b.channels() {
        return Err(Error::IncompatibleGrids(format!(
            "channel spaces differ ({} vs {})",
            a.channels(),
            b.channels()
        )));
    }
    match (a, b) {
        (CorrelationKernel::Stationary(a), CorrelationKernel::Stationary(b)) => {
            let mut points: Vec<(GridPoint, CMatrix, CMatrix)> = grid
                .points()
                .into_iter()
                .enumerate()
                .map(|(index, omega)| (GridPoint::Frequency { index, omega }, a.eval(omega), b.eval(omega)))
                .collect();
            let atoms_a = a.atoms();
            let atoms_b = b.atoms();
            let mut freqs: Vec<f64> = atoms_a.iter().chain(&atoms_b).map(|(w, _)| *w).collect();
            freqs.sort_by(f64::total_cmp);
            freqs.dedup();
            let n = a.channels();
            let lookup = |atoms: &[(f64, CMatrix)], w: f64| {
                atoms
                    .iter()
                    .find(|(x, _)| *x == w)
                    .map(|(_, m)| m.clone())
                    .unwrap_or_else(|| CMatrix::zeros(n, n))
            };
            for w in freqs {
                points.push((GridPoint::Atom { omega: w }, lookup(&atoms_a, w), lookup(&atoms_b, w)));
            }
            Ok(order_pointwise(&points, |p, _| *p, tol))
        }
        (CorrelationKernel::Sampled(a), CorrelationKernel::Sampled(b)) => {
            if !a.grid().same_as(b.grid()) {
                return Err(Error::IncompatibleGrids("sampled kernels live on different time grids".into()));
            }
            for k in [a, b] {
                let deviation = k.hermiticity_deviation();
                if deviation > 1e-8 {
                    return Err(Error::NonHermitianInput { deviation });
                }
            }
            let grid = *a.grid();
            let points = vec![(
                time_point(&grid, 0),
                a.gram().clone(),
                b.gram().clone(),
            )];
            Ok(order_pointwise(&points, |_, idx| time_point(&grid, idx), tol))
        }
        _ => Err(Error::IncompatibleGrids(
            "cannot compare a stationary kernel with a sampled one".into(),
        )),
    }
}

/// Two-reservoir comparison over cutoff and temperature: composite
/// A = α̃_high^hot + α̃_low^cold against B = α̃_low^hot + α̃_high^cold.
/// A − B = [γ̃_high − γ̃_low][κ_hot − κ_cold] ≥ 0, so the result is
/// StrictlyGreater, or Equivalent when either pair coincides.
#[allow(clippy::too_many_arguments)]
pub fn lutz_compare(
    gamma0: f64,
    lambda_high: f64,
    lambda_low: f64,
    t_hot: f64,
    t_cold: f64,
    family: CutoffFamily,
    grid: &FrequencyGrid,
    tol: &OrderTolerances,
) -> Result<OrderResult> {
    if !(lambda_high >= lambda_low) {
        return Err(Error::InvalidParameters(format!(
            "lambda_high ({lambda_high}) must not be below lambda_low ({lambda_low})"
        )));
    }
    if !(t_hot >= t_cold) {
        return Err(Error::InvalidParameters(format!(
            "t_hot ({t_hot}) must not be below t_cold ({t_cold})"
        )));
    }
    let reservoir = |lambda: f64, t: f64| -> Result<StationaryKernel> {
        StationaryKernel::thermal(&ThermalReservoirSpec::new(family, gamma0, lambda, t)?, 1)
    };
    let a = reservoir(lambda_high, t_hot)?.add(&reservoir(lambda_low, t_cold)?)?;
    let b = reservoir(lambda_low, t_hot)?.add(&reservoir(lambda_high, t_cold)?)?;
    compare_environments(&a.into(), &b.into(), grid, tol)
}

/// Best single-temperature fit of a composite's noise-to-damping ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdrFit {
    pub t_star: f64,
    /// max_ω |κ_eff(ω) − κ_{T*}(ω)| / max_ω |κ_eff(ω)|
    pub residual: f64,
}

/// Effective FDR kernel κ_eff(ω) = α̃(ω)/γ̃_total(ω) + ω on the grid.
pub fn effective_fdr_kernel(
    kernel: &StationaryKernel,
    total_damping: impl Fn(f64) -> f64,
    grid: &FrequencyGrid,
) -> Result<Vec<f64>> {
    if kernel.channels() != 1 {
        return Err(Error::InvalidParameters(format!(
            "FDR fit needs a scalar kernel (got {} channels)",
            kernel.channels()
        )));
    }
    let points = grid.points();
    let damping: Vec<f64> = points.iter().map(|&w| total_damping(w)).collect();
    let floor = 1e-12 * damping.iter().fold(0.0f64, |a, &g| a.max(g.abs()));
    for (&w, &g) in points.iter().zip(&damping) {
        if !(g > floor) {
            return Err(Error::DampingVanishes { omega: w, value: g });
        }
    }
    Ok(points
        .iter()
        .zip(&damping)
        .map(|(&w, &g)| kernel.eval(w)[(0, 0)].re / g + w)
        .collect())
}

fn fit_residual(omegas: &[f64], kappa: &[f64], t: f64) -> f64 {
    omegas
        .iter()
        .zip(kappa)
        .map(|(&w, &k)| (k - crate::spectral::fdr_kernel(w, t)).abs())
        .fold(0.0, f64::max)
}

/// Fit an effective temperature by golden-section search over T ∈ [0, T_max]
/// with T_max = 100·max|ω|. The max-norm residual is quasi-convex in T since
/// κ_T(ω) grows monotonically with T at every ω.
pub fn fdr_fit(kernel: &StationaryKernel, total_damping: impl Fn(f64) -> f64, grid: &FrequencyGrid) -> Result<FdrFit> {
    let kappa = effective_fdr_kernel(kernel, total_damping, grid)?;
    let omegas = grid.points();
    let t_max = 100.0 * grid.min().abs().max(grid.max().abs());
    let objective = |t: f64| fit_residual(&omegas, &kappa, t);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, t_max);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > 1e-10 * hi.max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    let t_star = 0.5 * (lo + hi);
    let scale = kappa.iter().fold(0.0f64, |a, k| a.max(k.abs())).max(SCALE_FLOOR);
    Ok(FdrFit {
        t_star,
        residual: objective(t_star) / scale,
    })
}
