// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Second-order algebraic Lindblad dissipators.
//!
//! For a system with interaction H_I = Σ_n L_n ⊗ l_n the coefficient matrix
//!
//! ```text
//! Δ_IJ(t) = Σ_nm ∫₀ᵗ∫₀ᵗ ⟨i|L_m(τ)|i′⟩ α_nm(τ′,τ) conj⟨j|L_n(τ′)|j′⟩ dτ dτ′
//! ```
//!
//! is indexed by pairs I = i·d + i′ for the basis e_I = |i⟩⟨i′|. With the
//! trapezoid rule this is the quadratic form conj(B†AB), where
//! B[(m,k), I] = w_k⟨i|L_m(τ_k)|i′⟩ and A is the block Gram matrix of α, so
//! Δ is positive semidefinite whenever the sampled kernel is.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::SuperOperator;
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::linalg::{eig_extremes, eigh, frobenius, hermiticity_deviation, hermitize, max_abs, sandwich, CMatrix, I, ZERO};
use crate::ordering::{order_pointwise, GridPoint, OrderResult, OrderTolerances};
use crate::spectral::{CorrelationKernel, SampledKernel, StationaryKernel};

/// Quadrature nodes per axis when nothing else is requested.
pub const DEFAULT_N_TAU: usize = 257;

/// Hermiticity tolerance for H and the couplings (relative).
pub const SYSTEM_HERMITICITY_TOL: f64 = 1e-12;

/// Relative bound on ‖R + i[Θ,·]‖ / ‖Φ‖ accepted by [`lindblad_decompose`].
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// One coupling operator L together with the environment channel it couples to.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub matrix: CMatrix,
    pub channel: usize,
}

/// System Hamiltonian, couplings, and the cached eigendecomposition of H.
#[derive(Debug, Clone)]
pub struct SystemModel {
    dim: usize,
    hamiltonian: CMatrix,
    couplings: Vec<Coupling>,
    channels: usize,
    energies: Vec<f64>,
    basis: CMatrix,
    /// Σ of the couplings on each channel, in the eigenbasis of H.
    channel_ops_eigen: Vec<CMatrix>,
}

impl SystemModel {
    pub fn new(hamiltonian: CMatrix, couplings: Vec<Coupling>) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if dim < 2 || hamiltonian.ncols() != dim {
            return Err(Error::InvalidSystem(format!(
                "hamiltonian must be square with dimension >= 2 (got {}x{})",
                hamiltonian.nrows(),
                hamiltonian.ncols()
            )));
        }
        check_hermitian(&hamiltonian, "hamiltonian")?;
        if couplings.is_empty() {
            return Err(Error::InvalidSystem("at least one coupling operator is required".into()));
        }
        for (k, c) in couplings.iter().enumerate() {
            if c.matrix.nrows() != dim || c.matrix.ncols() != dim {
                return Err(Error::InvalidSystem(format!(
                    "couplings[{k}] must be {dim}x{dim} (got {}x{})",
                    c.matrix.nrows(),
                    c.matrix.ncols()
                )));
            }
            check_hermitian(&c.matrix, &format!("couplings[{k}]"))?;
        }
        let channels = couplings.iter().map(|c| c.channel).max().unwrap_or(0) + 1;
        for n in 0..channels {
            if !couplings.iter().any(|c| c.channel == n) {
                return Err(Error::InvalidSystem(format!(
                    "coupling channels must form a contiguous range 0..{channels}; channel {n} is missing"
                )));
            }
        }
        let (energies, basis) = eigh(&hamiltonian);
        let channel_ops_eigen = (0..channels)
            .map(|n| {
                let op = couplings
                    .iter()
                    .filter(|c| c.channel == n)
                    .fold(CMatrix::zeros(dim, dim), |acc, c| acc + &c.matrix);
                basis.adjoint() * op * &basis
            })
            .collect();
        Ok(Self {
            dim,
            hamiltonian,
            couplings,
            channels,
            energies,
            basis,
            channel_ops_eigen,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// Number of environment channels the couplings address.
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Total coupling operator on channel `n`.
    pub fn channel_operator(&self, n: usize) -> CMatrix {
        &self.basis * &self.channel_ops_eigen[n] * self.basis.adjoint()
    }

    /// e^{iHτ} L_n e^{−iHτ}, by phase conjugation in the eigenbasis of H.
    pub fn interaction_picture_op(&self, n: usize, tau: f64) -> CMatrix {
        let e = &self.energies;
        let phased = CMatrix::from_fn(self.dim, self.dim, |a, b| {
            self.channel_ops_eigen[n][(a, b)] * Complex64::cis((e[a] - e[b]) * tau)
        });
        &self.basis * phased * self.basis.adjoint()
    }

    /// e^{−iHt} as a matrix.
    pub fn free_propagator(&self, t: f64) -> CMatrix {
        let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            self.energies.iter().map(|&e| Complex64::cis(-e * t)),
        ));
        &self.basis * phases * self.basis.adjoint()
    }

    /// Checks that a kernel addresses exactly this system's channels.
    pub fn check_kernel(&self, kernel: &CorrelationKernel) -> Result<()> {
        if kernel.channels() != self.channels {
            return Err(Error::KernelSystemMismatch {
                kernel: kernel.channels(),
                system: self.channels,
            });
        }
        Ok(())
    }
}

fn check_hermitian(m: &CMatrix, what: &str) -> Result<()> {
    if !crate::linalg::is_finite(m) {
        return Err(Error::InvalidSystem(format!("{what} has non-finite entries")));
    }
    let deviation = hermiticity_deviation(m);
    if deviation > SYSTEM_HERMITICITY_TOL {
        return Err(Error::InvalidSystem(format!(
            "{what} is not Hermitian (relative deviation {deviation:.3e})"
        )));
    }
    Ok(())
}

/// e^{iHτ} L_n e^{−iHτ}.
pub fn interaction_picture_op(system: &SystemModel, n: usize, tau: f64) -> CMatrix {
    system.interaction_picture_op(n, tau)
}

/// Samples a kernel on the quadrature grid `grid`. Stationary kernels are
/// transformed (on `freq`, or the heuristic grid); sampled kernels must
/// already live on `grid`.
pub fn sample_kernel(kernel: &CorrelationKernel, grid: &TimeGrid, freq: Option<&FrequencyGrid>) -> Result<SampledKernel> {
    match kernel {
        CorrelationKernel::Stationary(k) => k.sample(grid, freq),
        CorrelationKernel::Sampled(k) => {
            if !k.grid().same_as(grid) {
                return Err(Error::IncompatibleGrids(format!(
                    "sampled kernel grid {:?} does not match the quadrature grid {:?}",
                    k.grid(),
                    grid
                )));
            }
            Ok(k.clone())
        }
    }
}

/// Common transform grid for kernels that are compared or combined.
pub(crate) fn shared_frequency_grid(kernels: &[&CorrelationKernel], grid: &TimeGrid) -> Result<Option<FrequencyGrid>> {
    let mut combined: Option<StationaryKernel> = None;
    for k in kernels {
        if let CorrelationKernel::Stationary(s) = k {
            combined = Some(match combined {
                None => s.clone(),
                Some(c) => c.add(s)?,
            });
        }
    }
    match combined {
        Some(c) if c.has_thermal_part() => {
            let h = grid.spacing();
            Ok(Some(c.transform_grid(h, h * (grid.count() - 1) as f64)?))
        }
        _ => Ok(None),
    }
}

/// The d²×d² coefficient matrix Δ_IJ(t), I = i·d + i′.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipatorMatrix {
    pub time: f64,
    pub dim: usize,
    pub matrix: CMatrix,
    /// Set when the sampled kernel failed its positivity check, in which case
    /// Δ need not be positive semidefinite.
    pub warning: Option<String>,
}

impl DissipatorMatrix {
    pub fn zeros(dim: usize, time: f64) -> Self {
        Self {
            time,
            dim,
            matrix: CMatrix::zeros(dim * dim, dim * dim),
            warning: None,
        }
    }

    /// (min, max) eigenvalue.
    pub fn eig_extremes(&self) -> (f64, f64) {
        eig_extremes(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::eigvalsh(&self.matrix)
    }
}

fn check_time_args(t: f64, n_tau: usize) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameters(format!("t must be finite and >= 0 (got {t})")));
    }
    if n_tau < 2 {
        return Err(Error::InvalidParameters(format!("n_tau must be >= 2 (got {n_tau})")));
    }
    Ok(())
}

/// Δ(t) by n_tau-point trapezoid quadrature on [0, t] per axis.
pub fn algebraic_dissipator(system: &SystemModel, kernel: &CorrelationKernel, t: f64, n_tau: usize) -> Result<DissipatorMatrix> {
    algebraic_dissipator_on(system, kernel, t, n_tau, None)
}

/// As [`algebraic_dissipator`] with an explicit transform grid for stationary kernels.
pub fn algebraic_dissipator_on(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t: f64,
    n_tau: usize,
    freq: Option<&FrequencyGrid>,
) -> Result<DissipatorMatrix> {
    check_time_args(t, n_tau)?;
    system.check_kernel(kernel)?;
    if t == 0.0 {
        return Ok(DissipatorMatrix::zeros(system.dim(), 0.0));
    }
    let grid = TimeGrid::span(t, n_tau)?;
    let sampled = sample_kernel(kernel, &grid, freq)?;
    dissipator_from_samples(system, &sampled)
}

/// Δ from a kernel already sampled on [0, t].
pub fn dissipator_from_samples(system: &SystemModel, kernel: &SampledKernel) -> Result<DissipatorMatrix> {
    if kernel.channels() != system.channels() {
        return Err(Error::KernelSystemMismatch {
            kernel: kernel.channels(),
            system: system.channels(),
        });
    }
    let grid = kernel.grid();
    let d = system.dim();
    let len = grid.count();
    let times = grid.points();
    let weights = grid.weights();
    let mut b = CMatrix::zeros(system.channels() * len, d * d);
    for m in 0..system.channels() {
        for k in 0..len {
            let op = system.interaction_picture_op(m, times[k]);
            let row = kernel.index(m, k);
            for i in 0..d {
                for ip in 0..d {
                    b[(row, i * d + ip)] = op[(i, ip)] * weights[k];
                }
            }
        }
    }
    let gram = kernel.gram();
    let quad = b.adjoint() * (gram * &b);
    let matrix = hermitize(&quad.map(|z| z.conj()));

    let (lo, hi) = eig_extremes(gram);
    let warning = (lo < -1e-9 * hi.abs().max(f64::MIN_POSITIVE)).then(|| {
        format!("sampled kernel is not positive semidefinite (min eigenvalue {lo:.3e}, max {hi:.3e})")
    });
    Ok(DissipatorMatrix {
        time: grid.grid().max,
        dim: d,
        matrix,
        warning,
    })
}

/// Finite-difference rate definiteness of Δ on a uniform subgrid of [0, t].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateDefiniteness {
    /// Subgrid times t_0 = 0, …, t_steps = t.
    pub grid: Vec<f64>,
    /// Minimum eigenvalue of (Δ(t_{j+1}) − Δ(t_j)) / (t_{j+1} − t_j), one per step.
    pub min_rate_eig: Vec<f64>,
}

/// Diagnostic only: reports whether Δ(t) grows monotonically in the PSD sense.
pub fn rate_definiteness(
    system: &SystemModel,
    kernel: &CorrelationKernel,
    t: f64,
    n_tau: usize,
    steps: usize,
) -> Result<RateDefiniteness> {
    check_time_args(t, n_tau)?;
    if steps < 1 {
        return Err(Error::InvalidParameters("rate definiteness needs at least one step".into()));
    }
    if matches!(kernel, CorrelationKernel::Sampled(_)) {
        return Err(Error::UnsupportedKernel(
            "rate definiteness needs a stationary kernel (sampled kernels cover one window only)".into(),
        ));
    }
    let times: Vec<f64> = (0..=steps).map(|j| t * j as f64 / steps as f64).collect();
    let mut previous = DissipatorMatrix::zeros(system.dim(), 0.0);
    let mut min_rate_eig = Vec::with_capacity(steps);
    for w in times.windows(2) {
        let next = algebraic_dissipator(system, kernel, w[1], n_tau)?;
        let rate = (&next.matrix - &previous.matrix).unscale(w[1] - w[0]);
        min_rate_eig.push(eig_extremes(&rate).0);
        previous = next;
    }
    Ok(RateDefiniteness {
        grid: times,
        min_rate_eig,
    })
}

/// D[Δ]ρ = Σ_IJ Δ_IJ (e_I ρ e_J† − ½{e_J† e_I, ρ}) as a column-stacked superoperator.
pub fn lindblad_superoperator(delta: &CMatrix, d: usize) -> CMatrix {
    let dd = d * d;
    let mut out = CMatrix::zeros(dd, dd);
    // jump part: (e_I ρ e_J†)_{ij} = ρ_{i′j′}
    for i in 0..d {
        for ip in 0..d {
            for j in 0..d {
                for jp in 0..d {
                    out[(i + j * d, ip + jp * d)] += delta[(i * d + ip, j * d + jp)];
                }
            }
        }
    }
    // K = Σ_IJ Δ_IJ e_J† e_I, K_{j′i′} = Σ_i Δ_{(i,i′),(i,j′)}
    let mut k = CMatrix::zeros(d, d);
    for jp in 0..d {
        for ip in 0..d {
            k[(jp, ip)] = (0..d).map(|i| delta[(i * d + ip, i * d + jp)]).sum();
        }
    }
    let eye = CMatrix::identity(d, d);
    out -= (sandwich(&k, &eye) + sandwich(&eye, &k)).scale(0.5);
    out
}

/// Superoperator of ρ ↦ −i[Θ, ρ].
pub fn commutator_superoperator(theta: &CMatrix) -> CMatrix {
    let d = theta.nrows();
    let eye = CMatrix::identity(d, d);
    (sandwich(theta, &eye) - sandwich(&eye, theta)) * (-I)
}

/// Coefficients C_IJ of the unique expansion Φρ = Σ_IJ C_IJ e_I ρ e_J†.
pub fn jump_coefficients(phi: &SuperOperator) -> CMatrix {
    let d = phi.dim();
    let m = phi.matrix();
    CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, ip) = (row / d, row % d);
        let (j, jp) = (col / d, col % d);
        m[(i + j * d, ip + jp * d)]
    })
}

/// Projects a pair-indexed matrix onto operators orthogonal to the identity.
/// Two generators with the same action have equal projected coefficients.
pub fn traceless_projection(delta: &CMatrix, d: usize) -> CMatrix {
    let dd = d * d;
    let mut q = CMatrix::identity(dd, dd);
    let inv = 1.0 / d as f64;
    for a in 0..d {
        for b in 0..d {
            q[(a * d + a, b * d + b)] -= Complex64::new(inv, 0.0);
        }
    }
    &q * delta * &q
}

/// Φ = −i[Θ,·] + D[Δ] with traceless Hermitian Θ.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDecomposition {
    pub theta: CMatrix,
    pub delta: DissipatorMatrix,
    /// ‖Φ − (−i[Θ,·] + D[Δ])‖ / ‖Φ‖ (Frobenius).
    pub residual: f64,
}

/// Splits a generator into its unitary part, given its dissipator Δ.
pub fn lindblad_decompose(phi: &SuperOperator, delta: &DissipatorMatrix) -> Result<GeneratorDecomposition> {
    let d = phi.dim();
    if delta.dim != d {
        return Err(Error::InvalidParameters(format!(
            "generator acts on dimension {d} but the dissipator on {}",
            delta.dim
        )));
    }
    let remainder = phi.matrix() - lindblad_superoperator(&delta.matrix, d);
    // R(e_kl)_{il} = −iΘ_ik + iδ_ik Θ_ll; summing over l isolates Θ for traceless Θ.
    let mut theta = CMatrix::zeros(d, d);
    for i in 0..d {
        for k in 0..d {
            let mut acc = ZERO;
            for l in 0..d {
                // input e_kl has vec index k + l·d, output entry (i, l) has i + l·d
                acc += remainder[(i + l * d, k + l * d)];
            }
            theta[(i, k)] = acc * I / d as f64;
        }
    }
    let mut theta = hermitize(&theta);
    let shift = crate::linalg::trace(&theta) / d as f64;
    for i in 0..d {
        theta[(i, i)] -= shift;
    }
    let mismatch = remainder - commutator_superoperator(&theta);
    let scale = frobenius(phi.matrix());
    let residual = if scale > 0.0 {
        frobenius(&mismatch) / scale
    } else {
        max_abs(&mismatch)
    };
    if residual > DECOMPOSITION_TOL {
        return Err(Error::DecompositionResidualTooLarge {
            residual,
            bound: DECOMPOSITION_TOL,
        });
    }
    Ok(GeneratorDecomposition {
        theta,
        delta: delta.clone(),
        residual,
    })
}

/// Orders Δ_a(t) against Δ_b(t) with the kernel-comparison rules. Both kernels
/// are sampled through one shared transform grid.
pub fn dissipator_order(
    system: &SystemModel,
    kernel_a: &CorrelationKernel,
    kernel_b: &CorrelationKernel,
    t: f64,
    n_tau: usize,
    tol: &OrderTolerances,
) -> Result<OrderResult> {
    check_time_args(t, n_tau)?;
    system.check_kernel(kernel_a)?;
    system.check_kernel(kernel_b)?;
    let (da, db) = if t == 0.0 {
        let zero = DissipatorMatrix::zeros(system.dim(), 0.0);
        (zero.clone(), zero)
    } else {
        let grid = TimeGrid::span(t, n_tau)?;
        let freq = shared_frequency_grid(&[kernel_a, kernel_b], &grid)?;
        (
            algebraic_dissipator_on(system, kernel_a, t, n_tau, freq.as_ref())?,
            algebraic_dissipator_on(system, kernel_b, t, n_tau, freq.as_ref())?,
        )
    };
    let points = vec![(GridPoint::Pair { index: 0 }, da.matrix, db.matrix)];
    Ok(order_pointwise(&points, |_, index| GridPoint::Pair { index }, tol))
}
