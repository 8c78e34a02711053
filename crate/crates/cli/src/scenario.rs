// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files.
//!
//! A scenario is one JSON document. Complex numbers are `[re, im]` pairs and
//! matrices are lists of rows. Every section except those a command needs may
//! be omitted; numeric settings fall back to the defaults listed on
//! [`GridSpec`] and [`ToleranceSpec`].
//!
//! ```json
//! {
//!   "name": "qubit",
//!   "system": {
//!     "dim": 2,
//!     "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
//!     "couplings": [{"matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], "channel": 0}]
//!   },
//!   "environments": [
//!     {"kind": "thermal", "family": "drude", "gamma0": 0.1, "cutoff": 5, "temperature": 1, "channel": 0}
//!   ],
//!   "grids": {"omega_max": 50, "n_omega": 801, "t_max": 1, "n_t": 257, "dt": 0.01}
//! }
//! ```
//!
//! All environments are summed into one composite kernel; each contributes on
//! its own `channel`.

use std::path::Path;

use deco_core::dissipator::{Coupling, SystemModel};
use deco_core::evolution::DensityMatrix;
use deco_core::grid::FrequencyGrid;
use deco_core::linalg::{c, hermiticity_deviation, CMatrix};
use deco_core::ordering::OrderTolerances;
use deco_core::spectral::{
    composite_correlation, BathMode, CorrelationKernel, CutoffFamily, DiscreteBathSpec, StationaryKernel,
    ThermalReservoirSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Relative Hermiticity slack for matrices read from a scenario.
pub const INPUT_HERMITICITY_TOL: f64 = 1e-12;

type MatrixEntries = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub system: Option<SystemSpec>,
    #[serde(default)]
    pub environments: Vec<EnvironmentSpec>,
    #[serde(default)]
    pub grids: GridSpec,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub lutz: Option<LutzSpec>,
    #[serde(default)]
    pub rho0: Option<MatrixEntries>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub dim: usize,
    pub hamiltonian: MatrixEntries,
    pub couplings: Vec<CouplingSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub matrix: MatrixEntries,
    pub channel: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentSpec {
    Thermal(ThermalSpec),
    DiscreteBath(DiscreteBathFile),
    WhiteNoise(WhiteNoiseSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSpec {
    pub family: CutoffFamily,
    pub gamma0: f64,
    pub cutoff: f64,
    pub temperature: f64,
    #[serde(default)]
    pub channel: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteBathFile {
    pub modes: Vec<BathMode>,
    pub temperature: f64,
    pub fock_truncation: usize,
    #[serde(default)]
    pub channel: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhiteNoiseSpec {
    pub strength: f64,
    #[serde(default)]
    pub channel: usize,
}

/// Grid settings. Fallbacks: `omega_max` 50, `n_omega` 801, `t_max` 1,
/// `n_t` 257 (quadrature nodes per time axis), `dt` 0.01, `rate_steps` 8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub omega_max: f64,
    pub n_omega: usize,
    pub t_max: f64,
    pub n_t: usize,
    pub dt: f64,
    pub rate_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            omega_max: 50.0,
            n_omega: 801,
            t_max: 1.0,
            n_t: 257,
            dt: 0.01,
            rate_steps: 8,
        }
    }
}

/// Tolerances. Fallbacks: `tol_rel` 1e-9, `equivalence` 1e-12, `strictness`
/// 1e-6 (ordering), `step_check` 1e-6 (master-equation half-step check),
/// `fdr_residual` 1e-6 (largest fit residual still read as thermal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceSpec {
    pub tol_rel: f64,
    pub equivalence: f64,
    pub strictness: f64,
    pub step_check: f64,
    pub fdr_residual: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        let order = OrderTolerances::default();
        Self {
            tol_rel: order.tol_rel,
            equivalence: order.equivalence,
            strictness: order.strictness,
            step_check: 1e-6,
            fdr_residual: 1e-6,
        }
    }
}

impl ToleranceSpec {
    pub fn order(&self) -> OrderTolerances {
        OrderTolerances {
            tol_rel: self.tol_rel,
            equivalence: self.equivalence,
            strictness: self.strictness,
        }
    }
}

/// Parameters of the two-reservoir cutoff/temperature comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LutzSpec {
    pub family: CutoffFamily,
    pub gamma0: f64,
    pub lambda_high: f64,
    pub lambda_low: f64,
    pub t_hot: f64,
    pub t_cold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    Thermal(ThermalReservoirSpec),
    DiscreteBath(DiscreteBathSpec),
    WhiteNoise { strength: f64, channel: usize },
}

impl Environment {
    pub fn channel(&self) -> usize {
        match self {
            Environment::Thermal(s) => s.channel,
            Environment::DiscreteBath(s) => s.channel,
            Environment::WhiteNoise { channel, .. } => *channel,
        }
    }

    /// Single-channel kernel of this environment alone.
    fn kernel(&self) -> deco_core::Result<StationaryKernel> {
        match self {
            Environment::Thermal(s) => StationaryKernel::thermal(&s.on_channel(0), 1),
            Environment::DiscreteBath(s) => StationaryKernel::discrete_bath(
                &DiscreteBathSpec {
                    channel: 0,
                    ..s.clone()
                },
                1,
            ),
            Environment::WhiteNoise { strength, .. } => StationaryKernel::white_noise(*strength, 0, 1),
        }
    }
}

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: Option<String>,
    pub system: Option<SystemModel>,
    pub environments: Vec<Environment>,
    pub grids: GridSpec,
    pub tolerances: ToleranceSpec,
    pub lutz: Option<LutzSpec>,
    pub rho0: Option<DensityMatrix>,
    pub seed: u64,
    /// Raw document, hashed into report digests.
    pub source: String,
}

impl Scenario {
    pub fn frequency_grid(&self) -> Result<FrequencyGrid> {
        Ok(FrequencyGrid::symmetric(self.grids.omega_max, self.grids.n_omega)?)
    }

    /// Number of environment channels (one past the largest channel index).
    pub fn channels(&self) -> usize {
        self.environments.iter().map(|e| e.channel() + 1).max().unwrap_or(0)
    }

    /// Sum of all environments, each on its channel.
    pub fn kernel(&self) -> Result<CorrelationKernel> {
        if self.environments.is_empty() {
            return Err(CliError::validation("environments", "at least one environment is required"));
        }
        let mut parts = Vec::with_capacity(self.environments.len());
        let mut map = Vec::with_capacity(self.environments.len());
        for (k, env) in self.environments.iter().enumerate() {
            let kernel = env
                .kernel()
                .map_err(|e| CliError::validation(format!("environments[{k}]"), e))?;
            parts.push(CorrelationKernel::from(kernel));
            map.push(vec![env.channel()]);
        }
        let composite = composite_correlation(&parts, &map)?;
        if let Some(system) = &self.system {
            if composite.channels() != system.channels() {
                return Err(CliError::validation(
                    "environments",
                    format!(
                        "environments cover {} channels but the system couples {}",
                        composite.channels(),
                        system.channels()
                    ),
                ));
            }
        }
        Ok(composite)
    }

    pub fn require_system(&self, command: &str) -> Result<&SystemModel> {
        self.system
            .as_ref()
            .ok_or_else(|| CliError::validation("system", format!("required by `{command}`")))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = deserialize_with_path(text)?;
    validate(file, text)
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// Parses a standalone density matrix document (a list of rows of `[re, im]`).
pub fn parse_density_matrix(text: &str, field: &str) -> Result<DensityMatrix> {
    let entries: MatrixEntries = deserialize_with_path(text).map_err(|e| match e {
        CliError::Schema { path, message } if path == "." => CliError::Schema {
            path: field.to_string(),
            message,
        },
        CliError::Schema { path, message } => CliError::Schema {
            path: format!("{field}{path}"),
            message,
        },
        other => other,
    })?;
    density_matrix(&entries, None, field)
}

fn deserialize_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| CliError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

fn matrix(entries: &MatrixEntries, dim: Option<usize>, field: &str) -> Result<CMatrix> {
    let n = dim.unwrap_or(entries.len());
    if entries.len() != n || entries.iter().any(|row| row.len() != n) {
        return Err(CliError::validation(field, format!("expected a {n}x{n} matrix of [re, im] pairs")));
    }
    if n == 0 {
        return Err(CliError::validation(field, "matrix is empty"));
    }
    if entries.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::validation(field, "entries must be finite"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(entries[i][j][0], entries[i][j][1])))
}

fn hermitian(entries: &MatrixEntries, dim: usize, field: &str) -> Result<CMatrix> {
    let m = matrix(entries, Some(dim), field)?;
    let deviation = hermiticity_deviation(&m);
    if deviation > INPUT_HERMITICITY_TOL {
        return Err(CliError::validation(
            field,
            format!("matrix is not Hermitian (relative deviation {deviation:.3e})"),
        ));
    }
    Ok(m)
}

fn density_matrix(entries: &MatrixEntries, dim: Option<usize>, field: &str) -> Result<DensityMatrix> {
    let m = matrix(entries, dim, field)?;
    DensityMatrix::new(m).map_err(|e| CliError::validation(field, e))
}

fn positive(value: f64, field: String) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::validation(field, format!("must be finite and > 0 (got {value})")))
    }
}

fn nonnegative(value: f64, field: String) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::validation(field, format!("must be finite and >= 0 (got {value})")))
    }
}

fn validate_system(spec: &SystemSpec) -> Result<SystemModel> {
    if spec.dim < 2 {
        return Err(CliError::validation("system.dim", format!("must be >= 2 (got {})", spec.dim)));
    }
    let h = hermitian(&spec.hamiltonian, spec.dim, "system.hamiltonian")?;
    if spec.couplings.is_empty() {
        return Err(CliError::validation("system.couplings", "at least one coupling is required"));
    }
    let mut couplings = Vec::with_capacity(spec.couplings.len());
    for (k, cs) in spec.couplings.iter().enumerate() {
        let m = hermitian(&cs.matrix, spec.dim, &format!("system.couplings[{k}].matrix"))?;
        couplings.push(Coupling {
            matrix: m,
            channel: cs.channel,
        });
    }
    SystemModel::new(h, couplings).map_err(|e| CliError::validation("system.couplings", e))
}

fn validate_environment(env: &EnvironmentSpec, k: usize) -> Result<Environment> {
    let field = |name: &str| format!("environments[{k}].{name}");
    match env {
        EnvironmentSpec::Thermal(s) => {
            positive(s.gamma0, field("gamma0"))?;
            positive(s.cutoff, field("cutoff"))?;
            nonnegative(s.temperature, field("temperature"))?;
            let spec = ThermalReservoirSpec::new(s.family, s.gamma0, s.cutoff, s.temperature)
                .map_err(|e| CliError::validation(format!("environments[{k}]"), e))?;
            Ok(Environment::Thermal(spec.on_channel(s.channel)))
        }
        EnvironmentSpec::DiscreteBath(s) => {
            nonnegative(s.temperature, field("temperature"))?;
            if s.modes.is_empty() {
                return Err(CliError::validation(field("modes"), "at least one mode is required"));
            }
            for (j, mode) in s.modes.iter().enumerate() {
                positive(mode.omega, field(&format!("modes[{j}].omega")))?;
                if !mode.coupling.is_finite() {
                    return Err(CliError::validation(field(&format!("modes[{j}].coupling")), "must be finite"));
                }
            }
            if s.fock_truncation < 2 {
                return Err(CliError::validation(field("fock_truncation"), "must be >= 2"));
            }
            let spec = DiscreteBathSpec {
                modes: s.modes.clone(),
                temperature: s.temperature,
                fock_truncation: s.fock_truncation,
                channel: s.channel,
            };
            spec.validate().map_err(|e| CliError::validation(field("fock_truncation"), e))?;
            Ok(Environment::DiscreteBath(spec))
        }
        EnvironmentSpec::WhiteNoise(s) => {
            nonnegative(s.strength, field("strength"))?;
            Ok(Environment::WhiteNoise {
                strength: s.strength,
                channel: s.channel,
            })
        }
    }
}

fn validate_grids(g: &GridSpec) -> Result<()> {
    positive(g.omega_max, "grids.omega_max".into())?;
    positive(g.t_max, "grids.t_max".into())?;
    positive(g.dt, "grids.dt".into())?;
    if g.n_omega < 2 {
        return Err(CliError::validation("grids.n_omega", "must be >= 2"));
    }
    if g.n_t < 2 {
        return Err(CliError::validation("grids.n_t", "must be >= 2"));
    }
    if g.rate_steps < 1 {
        return Err(CliError::validation("grids.rate_steps", "must be >= 1"));
    }
    Ok(())
}

fn validate_tolerances(t: &ToleranceSpec) -> Result<()> {
    positive(t.tol_rel, "tolerances.tol_rel".into())?;
    positive(t.equivalence, "tolerances.equivalence".into())?;
    positive(t.strictness, "tolerances.strictness".into())?;
    positive(t.step_check, "tolerances.step_check".into())?;
    positive(t.fdr_residual, "tolerances.fdr_residual".into())
}

fn validate_lutz(l: &LutzSpec) -> Result<()> {
    positive(l.gamma0, "lutz.gamma0".into())?;
    positive(l.lambda_low, "lutz.lambda_low".into())?;
    positive(l.lambda_high, "lutz.lambda_high".into())?;
    nonnegative(l.t_cold, "lutz.t_cold".into())?;
    nonnegative(l.t_hot, "lutz.t_hot".into())?;
    if l.lambda_high < l.lambda_low {
        return Err(CliError::validation("lutz.lambda_high", "must not be below lambda_low"));
    }
    if l.t_hot < l.t_cold {
        return Err(CliError::validation("lutz.t_hot", "must not be below t_cold"));
    }
    Ok(())
}

fn validate(file: ScenarioFile, source: &str) -> Result<Scenario> {
    let system = file.system.as_ref().map(validate_system).transpose()?;
    let environments = file
        .environments
        .iter()
        .enumerate()
        .map(|(k, e)| validate_environment(e, k))
        .collect::<Result<Vec<_>>>()?;
    validate_grids(&file.grids)?;
    validate_tolerances(&file.tolerances)?;
    if let Some(l) = &file.lutz {
        validate_lutz(l)?;
    }
    let rho0 = file
        .rho0
        .as_ref()
        .map(|entries| density_matrix(entries, system.as_ref().map(SystemModel::dim), "rho0"))
        .transpose()?;
    let scenario = Scenario {
        name: file.name,
        system,
        environments,
        grids: file.grids,
        tolerances: file.tolerances,
        lutz: file.lutz,
        rho0,
        seed: file.seed,
        source: source.to_string(),
    };
    if !scenario.environments.is_empty() {
        // channel layout is checked eagerly so that every command sees it
        scenario.kernel()?;
    }
    Ok(scenario)
}
