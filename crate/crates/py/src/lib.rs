// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Python module `deco`.
//!
//! Matrices cross the boundary as nested lists of complex numbers. Structured
//! results (order verdicts, positivity reports, command reports) come back as
//! plain dicts.

use deco_cli::{CliError, Command, Format, InitialState, Request};
use deco_core::dissipator::{self, Coupling, SystemModel};
use deco_core::evolution::{self, DensityMatrix, MasterOptions, Method};
use deco_core::linalg::CMatrix;
use deco_core::ordering::{self, OrderTolerances};
use deco_core::spectral::{
    self, BathMode, CorrelationKernel, CutoffFamily, DiscreteBathSpec, StationaryKernel, ThermalReservoirSpec,
};
use deco_core::FrequencyGrid;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

type PyMatrix = Vec<Vec<Complex64>>;

fn core_err(e: deco_core::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn cli_err(e: CliError) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        3 => PyArithmeticError::new_err(e.to_string()),
        _ => PyOSError::new_err(e.to_string()),
    }
}

fn to_matrix(rows: &PyMatrix, what: &str) -> PyResult<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err(format!("{what} must be a non-empty rectangular matrix")));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> PyMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_state(rows: &PyMatrix) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_matrix(rows, "rho0")?).map_err(core_err)
}

fn parse_family(family: &str) -> PyResult<CutoffFamily> {
    match family {
        "drude" => Ok(CutoffFamily::Drude),
        "exponential_cutoff" => Ok(CutoffFamily::ExponentialCutoff),
        other => Err(PyValueError::new_err(format!(
            "unknown cutoff family {other:?} (expected \"drude\" or \"exponential_cutoff\")"
        ))),
    }
}

fn to_py_json<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_loads(py, &text)
}

fn json_loads(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn grid(omega_max: f64, n_omega: usize) -> PyResult<FrequencyGrid> {
    FrequencyGrid::symmetric(omega_max, n_omega).map_err(core_err)
}

/// A thermal reservoir with a Drude or exponential cutoff.
#[pyclass(module = "deco", frozen, from_py_object)]
#[derive(Clone)]
struct ThermalReservoir {
    spec: ThermalReservoirSpec,
}

#[pymethods]
impl ThermalReservoir {
    #[new]
    #[pyo3(signature = (family, gamma0, cutoff, temperature, channel = 0))]
    fn new(family: &str, gamma0: f64, cutoff: f64, temperature: f64, channel: usize) -> PyResult<Self> {
        let spec = ThermalReservoirSpec::new(parse_family(family)?, gamma0, cutoff, temperature)
            .map_err(core_err)?
            .on_channel(channel);
        Ok(Self { spec })
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.spec.temperature
    }

    #[getter]
    fn cutoff(&self) -> f64 {
        self.spec.cutoff
    }

    #[getter]
    fn gamma0(&self) -> f64 {
        self.spec.gamma0
    }

    /// Damping kernel at ω.
    fn damping(&self, omega: f64) -> f64 {
        spectral::damping_kernel(omega, &self.spec)
    }

    /// Noise spectrum at ω.
    fn correlation(&self, omega: f64) -> f64 {
        spectral::correlation_freq(omega, &self.spec)
    }

    fn __repr__(&self) -> String {
        format!(
            "ThermalReservoir(family={:?}, gamma0={}, cutoff={}, temperature={}, channel={})",
            self.spec.family, self.spec.gamma0, self.spec.cutoff, self.spec.temperature, self.spec.channel
        )
    }
}

/// Matrix-valued stationary correlation kernel over the channel space.
#[pyclass(module = "deco", frozen, from_py_object)]
#[derive(Clone)]
struct Kernel {
    inner: StationaryKernel,
}

impl Kernel {
    fn correlation(&self) -> CorrelationKernel {
        self.inner.clone().into()
    }
}

#[pymethods]
impl Kernel {
    #[staticmethod]
    #[pyo3(signature = (reservoir, channels = 1))]
    fn thermal(reservoir: &ThermalReservoir, channels: usize) -> PyResult<Self> {
        let inner = StationaryKernel::thermal(&reservoir.spec, channels).map_err(core_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (strength, channel = 0, channels = 1))]
    fn white_noise(strength: f64, channel: usize, channels: usize) -> PyResult<Self> {
        let inner = StationaryKernel::white_noise(strength, channel, channels).map_err(core_err)?;
        Ok(Self { inner })
    }

    /// `modes` is a list of (frequency, coupling) pairs.
    #[staticmethod]
    #[pyo3(signature = (modes, temperature, fock_truncation, channel = 0, channels = 1))]
    fn discrete_bath(
        modes: Vec<(f64, f64)>,
        temperature: f64,
        fock_truncation: usize,
        channel: usize,
        channels: usize,
    ) -> PyResult<Self> {
        let spec = DiscreteBathSpec {
            modes: modes.into_iter().map(|(omega, coupling)| BathMode { omega, coupling }).collect(),
            temperature,
            fock_truncation,
            channel,
        };
        spec.validate().map_err(core_err)?;
        let inner = StationaryKernel::discrete_bath(&spec, channels).map_err(core_err)?;
        Ok(Self { inner })
    }

    /// Sum of `parts`; `channel_map[k]` lists the target channel of each of
    /// part k's channels.
    #[staticmethod]
    fn composite(parts: Vec<Kernel>, channel_map: Vec<Vec<usize>>) -> PyResult<Self> {
        let parts: Vec<CorrelationKernel> = parts.iter().map(Kernel::correlation).collect();
        match spectral::composite_correlation(&parts, &channel_map).map_err(core_err)? {
            CorrelationKernel::Stationary(inner) => Ok(Self { inner }),
            CorrelationKernel::Sampled(_) => Err(PyValueError::new_err("composite of stationary parts was sampled")),
        }
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    /// Spectral matrix at ω (atoms excluded).
    fn eval(&self, omega: f64) -> PyMatrix {
        from_matrix(&self.inner.eval(omega))
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.scaled(factor),
        }
    }

    fn __add__(&self, other: &Kernel) -> PyResult<Self> {
        let inner = self.inner.add(&other.inner).map_err(core_err)?;
        Ok(Self { inner })
    }

    #[pyo3(signature = (omega_max = 50.0, n_omega = 801, tol_rel = 1e-9))]
    fn check_positive(&self, py: Python<'_>, omega_max: f64, n_omega: usize, tol_rel: f64) -> PyResult<Py<PyAny>> {
        let report =
            ordering::check_kernel_positive(&self.correlation(), &grid(omega_max, n_omega)?, tol_rel).map_err(core_err)?;
        to_py_json(py, &report)
    }

    fn __repr__(&self) -> String {
        format!("Kernel(channels={}, terms={})", self.inner.channels(), self.inner.terms().len())
    }
}

/// System Hamiltonian with its coupling operators.
#[pyclass(module = "deco", frozen)]
struct System {
    inner: SystemModel,
}

#[pymethods]
impl System {
    /// `couplings` is a list of (matrix, channel) pairs.
    #[new]
    fn new(hamiltonian: PyMatrix, couplings: Vec<(PyMatrix, usize)>) -> PyResult<Self> {
        let h = to_matrix(&hamiltonian, "hamiltonian")?;
        let couplings = couplings
            .iter()
            .map(|(m, channel)| {
                Ok(Coupling {
                    matrix: to_matrix(m, "coupling")?,
                    channel: *channel,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = SystemModel::new(h, couplings).map_err(core_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.channels()
    }

    fn __repr__(&self) -> String {
        format!("System(dim={}, channels={})", self.inner.dim(), self.inner.channels())
    }
}

#[pyfunction]
fn fdr_kernel(omega: f64, temperature: f64) -> f64 {
    spectral::fdr_kernel(omega, temperature)
}

#[pyfunction]
#[pyo3(signature = (a, b, omega_max = 50.0, n_omega = 801, tol_rel = 1e-9, equivalence = 1e-12, strictness = 1e-6))]
#[allow(clippy::too_many_arguments)]
fn compare_environments(
    py: Python<'_>,
    a: &Kernel,
    b: &Kernel,
    omega_max: f64,
    n_omega: usize,
    tol_rel: f64,
    equivalence: f64,
    strictness: f64,
) -> PyResult<Py<PyAny>> {
    let tol = OrderTolerances {
        tol_rel,
        equivalence,
        strictness,
    };
    let result = ordering::compare_environments(&a.correlation(), &b.correlation(), &grid(omega_max, n_omega)?, &tol)
        .map_err(core_err)?;
    to_py_json(py, &result)
}

#[pyfunction]
#[pyo3(signature = (gamma0, lambda_high, lambda_low, t_hot, t_cold, family = "drude", omega_max = 50.0, n_omega = 801))]
#[allow(clippy::too_many_arguments)]
fn lutz_compare(
    py: Python<'_>,
    gamma0: f64,
    lambda_high: f64,
    lambda_low: f64,
    t_hot: f64,
    t_cold: f64,
    family: &str,
    omega_max: f64,
    n_omega: usize,
) -> PyResult<Py<PyAny>> {
    let result = ordering::lutz_compare(
        gamma0,
        lambda_high,
        lambda_low,
        t_hot,
        t_cold,
        parse_family(family)?,
        &grid(omega_max, n_omega)?,
        &OrderTolerances::default(),
    )
    .map_err(core_err)?;
    to_py_json(py, &result)
}

/// Best single temperature for a sum of reservoirs; returns (t_star, residual).
#[pyfunction]
#[pyo3(signature = (reservoirs, omega_max = 50.0, n_omega = 801))]
fn fdr_fit(reservoirs: Vec<ThermalReservoir>, omega_max: f64, n_omega: usize) -> PyResult<(f64, f64)> {
    let mut kernel = StationaryKernel::zero(1);
    for r in &reservoirs {
        let part = StationaryKernel::thermal(&r.spec.on_channel(0), 1).map_err(core_err)?;
        kernel = kernel.add(&part).map_err(core_err)?;
    }
    let specs: Vec<ThermalReservoirSpec> = reservoirs.iter().map(|r| r.spec).collect();
    let damping = |omega: f64| specs.iter().map(|s| spectral::damping_kernel(omega, s)).sum::<f64>();
    let fit = ordering::fdr_fit(&kernel, damping, &grid(omega_max, n_omega)?).map_err(core_err)?;
    Ok((fit.t_star, fit.residual))
}

/// The d²×d² dissipator coefficient matrix at time t.
#[pyfunction]
#[pyo3(signature = (system, kernel, t, n_tau = dissipator::DEFAULT_N_TAU))]
fn algebraic_dissipator(system: &System, kernel: &Kernel, t: f64, n_tau: usize) -> PyResult<PyMatrix> {
    let delta = dissipator::algebraic_dissipator(&system.inner, &kernel.correlation(), t, n_tau).map_err(core_err)?;
    Ok(from_matrix(&delta.matrix))
}

#[pyfunction]
#[pyo3(signature = (system, kernel, t, rho0, n_tau = dissipator::DEFAULT_N_TAU))]
fn magnus_propagate(system: &System, kernel: &Kernel, t: f64, rho0: PyMatrix, n_tau: usize) -> PyResult<PyMatrix> {
    let rho = evolution::magnus_propagate(&system.inner, &kernel.correlation(), t, n_tau, &to_state(&rho0)?)
        .map_err(core_err)?;
    Ok(from_matrix(rho.matrix()))
}

/// Returns (times, states) on t = 0, dt, …, t_span.
#[pyfunction]
#[pyo3(signature = (system, kernel, t_span, dt, rho0, check_tolerance = 1e-6))]
fn master_equation_evolve(
    system: &System,
    kernel: &Kernel,
    t_span: f64,
    dt: f64,
    rho0: PyMatrix,
    check_tolerance: f64,
) -> PyResult<(Vec<f64>, Vec<PyMatrix>)> {
    let options = MasterOptions {
        check_tolerance,
        ..MasterOptions::default()
    };
    let traj = evolution::master_equation_evolve_with(
        &system.inner,
        &kernel.correlation(),
        t_span,
        dt,
        &to_state(&rho0)?,
        &options,
    )
    .map_err(core_err)?;
    Ok((traj.times, traj.states.iter().map(|s| from_matrix(s.matrix())).collect()))
}

#[pyfunction]
fn trace_distance(rho1: PyMatrix, rho2: PyMatrix) -> PyResult<f64> {
    Ok(evolution::trace_distance(&to_state(&rho1)?, &to_state(&rho2)?))
}

fn parse_command(name: &str) -> PyResult<Command> {
    Ok(match name {
        "kernels" => Command::Kernels,
        "compare" => Command::Compare,
        "lutz" => Command::Lutz,
        "dissipator" => Command::Dissipator,
        "evolve" => Command::Evolve,
        "fdr-check" => Command::FdrCheck,
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    })
}

/// Runs a command on scenario JSON text, as the `deco` binary does, and
/// returns the rendered report.
#[pyfunction]
#[pyo3(signature = (command, scenario, scenario_b = None, method = None, rho0 = None, dt = None, format = "json"))]
fn run(
    command: &str,
    scenario: &str,
    scenario_b: Option<&str>,
    method: Option<&str>,
    rho0: Option<&str>,
    dt: Option<f64>,
    format: &str,
) -> PyResult<String> {
    let format = match format {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    };
    let mut request = Request::new(parse_command(command)?, deco_cli::parse_scenario(scenario).map_err(cli_err)?);
    request.scenario_b = scenario_b.map(deco_cli::parse_scenario).transpose().map_err(cli_err)?;
    request.method = method
        .map(|m| match m {
            "master" => Ok(Method::Master),
            "magnus" => Ok(Method::Magnus),
            "exact" => Ok(Method::Exact),
            other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        })
        .transpose()?;
    request.rho0 = rho0
        .map(|text| {
            deco_cli::parse_density_matrix(text, "rho0").map(|state| InitialState {
                source: text.to_string(),
                state,
            })
        })
        .transpose()
        .map_err(cli_err)?;
    request.dt = dt;
    let report = deco_cli::run_command(&request).map_err(cli_err)?;
    Ok(report.render(format))
}

#[pymodule]
fn deco(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<ThermalReservoir>()?;
    m.add_class::<Kernel>()?;
    m.add_class::<System>()?;
    m.add_function(wrap_pyfunction!(fdr_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(compare_environments, m)?)?;
    m.add_function(wrap_pyfunction!(lutz_compare, m)?)?;
    m.add_function(wrap_pyfunction!(fdr_fit, m)?)?;
    m.add_function(wrap_pyfunction!(algebraic_dissipator, m)?)?;
    m.add_function(wrap_pyfunction!(magnus_propagate, m)?)?;
    m.add_function(wrap_pyfunction!(master_equation_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
