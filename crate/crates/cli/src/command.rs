// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Dispatch of one CLI command onto the library operations.

use std::time::Instant;

use deco_core::dissipator::{algebraic_dissipator, rate_definiteness};
use deco_core::evolution::{
    exact_bath_trajectory, magnus_trajectory, master_equation_evolve_with, DensityMatrix, MasterOptions, Method,
    Trajectory,
};
use deco_core::ordering::{check_kernel_positive, compare_environments, effective_fdr_kernel, fdr_fit, lutz_compare, OrderResult};
use deco_core::spectral::{fdr_kernel, CorrelationKernel};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::format::format_g17;
use crate::report::{number, Cell, Report, Table};
use crate::scenario::{Environment, Scenario};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Kernels,
    Compare,
    Lutz,
    Dissipator,
    Evolve,
    FdrCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernels => "kernels",
            Command::Compare => "compare",
            Command::Lutz => "lutz",
            Command::Dissipator => "dissipator",
            Command::Evolve => "evolve",
            Command::FdrCheck => "fdr-check",
        }
    }
}

/// Initial state given on the command line, kept with its source text.
#[derive(Debug, Clone)]
pub struct InitialState {
    pub source: String,
    pub state: DensityMatrix,
}

/// Everything one invocation depends on.
#[derive(Debug, Clone)]
pub struct Request {
    pub command: Command,
    pub scenario: Scenario,
    pub scenario_b: Option<Scenario>,
    pub method: Option<Method>,
    pub rho0: Option<InitialState>,
    pub dt: Option<f64>,
    pub timing: bool,
}

impl Request {
    pub fn new(command: Command, scenario: Scenario) -> Self {
        Self {
            command,
            scenario,
            scenario_b: None,
            method: None,
            rho0: None,
            dt: None,
            timing: false,
        }
    }

    fn check_flags(&self) -> Result<()> {
        let evolve = self.command == Command::Evolve;
        if self.scenario_b.is_some() != (self.command == Command::Compare) {
            return Err(CliError::Usage("--scenario-b is required by `compare` and only accepted there".into()));
        }
        if !evolve && (self.method.is_some() || self.rho0.is_some() || self.dt.is_some()) {
            return Err(CliError::Usage("--method, --rho0 and --dt only apply to `evolve`".into()));
        }
        if evolve && self.method.is_none() {
            return Err(CliError::Usage("`evolve` needs --method master|magnus|exact".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::validation("--dt", format!("must be finite and > 0 (got {dt})")));
            }
        }
        Ok(())
    }

    /// SHA-256 over the command, each input document and the effective flags.
    pub fn inputs_digest(&self) -> String {
        let mut hasher = Sha256::new();
        let mut field = |label: &str, bytes: &[u8]| {
            hasher.update(label.as_bytes());
            hasher.update([0u8]);
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(bytes);
        };
        field("command", self.command.name().as_bytes());
        field("scenario", self.scenario.source.as_bytes());
        if let Some(b) = &self.scenario_b {
            field("scenario_b", b.source.as_bytes());
        }
        if let Some(m) = self.method {
            field("method", method_name(m).as_bytes());
        }
        if let Some(r) = &self.rho0 {
            field("rho0", r.source.as_bytes());
        }
        if let Some(dt) = self.dt {
            field("dt", format_g17(dt).as_bytes());
        }
        format!("sha256:{}", hex::encode(hasher.finalize()))
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Master => "master",
        Method::Magnus => "magnus",
        Method::Exact => "exact",
    }
}

/// Runs one command.
pub fn run_command(request: &Request) -> Result<Report> {
    request.check_flags()?;
    let start = Instant::now();
    let (outputs, table) = match request.command {
        Command::Kernels => kernels(&request.scenario)?,
        Command::Compare => compare(&request.scenario, request.scenario_b.as_ref().expect("checked"))?,
        Command::Lutz => lutz(&request.scenario)?,
        Command::Dissipator => dissipator(&request.scenario)?,
        Command::Evolve => evolve(request)?,
        Command::FdrCheck => fdr_check(&request.scenario)?,
    };
    Ok(Report {
        command: request.command.name().into(),
        inputs_digest: request.inputs_digest(),
        outputs,
        table,
        tool_version: TOOL_VERSION.into(),
        wall_time: request.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

fn kernel_columns(channels: usize) -> Vec<String> {
    let mut cols = vec!["omega".to_string()];
    for n in 0..channels {
        for m in 0..channels {
            cols.push(format!("alpha_re_{n}{m}"));
            cols.push(format!("alpha_im_{n}{m}"));
        }
    }
    cols
}

fn kernels(scenario: &Scenario) -> Result<(Value, Table)> {
    let kernel = scenario.kernel()?;
    let CorrelationKernel::Stationary(stationary) = &kernel else {
        unreachable!("scenario environments are stationary")
    };
    let grid = scenario.frequency_grid()?;
    let channels = kernel.channels();
    let rows: Vec<Vec<f64>> = grid
        .points()
        .into_iter()
        .map(|w| {
            let value = stationary.eval(w);
            let mut row = vec![w];
            for n in 0..channels {
                for m in 0..channels {
                    row.push(value[(n, m)].re);
                    row.push(value[(n, m)].im);
                }
            }
            row
        })
        .collect();
    let table = Table::numeric(kernel_columns(channels), rows);
    let report = check_kernel_positive(&kernel, &grid, scenario.tolerances.tol_rel)?;
    if !report.is_psd {
        return Err(CliError::Numerical(format!(
            "kernel is not positive semidefinite: min eigenvalue {:e} at {:?}",
            report.min_eigenvalue, report.worst_point
        )));
    }
    let outputs = json!({
        "channels": channels,
        "columns": table.columns,
        "rows": table.rows_json(),
        "positivity": serde_json::to_value(report).expect("report serializes"),
    });
    Ok((outputs, table))
}

fn order_outputs(result: &OrderResult) -> (Value, Table) {
    let outputs = serde_json::to_value(result).expect("order result serializes");
    let verdict = outputs["verdict"].as_str().expect("verdict is a string").to_string();
    let table = Table {
        columns: vec!["verdict".into(), "min_eig_forward".into(), "min_eig_backward".into()],
        rows: vec![vec![
            Cell::Text(verdict),
            Cell::Number(result.min_eig_forward),
            Cell::Number(result.min_eig_backward),
        ]],
    };
    (outputs, table)
}

fn compare(a: &Scenario, b: &Scenario) -> Result<(Value, Table)> {
    let ka = a.kernel()?;
    let kb = b.kernel().map_err(|e| match e {
        CliError::Validation { field, message } => CliError::Validation {
            field: format!("scenario-b {field}"),
            message,
        },
        other => other,
    })?;
    if ka.channels() != kb.channels() {
        return Err(CliError::validation(
            "environments",
            format!("scenarios have {} and {} channels", ka.channels(), kb.channels()),
        ));
    }
    let result = compare_environments(&ka, &kb, &a.frequency_grid()?, &a.tolerances.order())?;
    Ok(order_outputs(&result))
}

fn lutz(scenario: &Scenario) -> Result<(Value, Table)> {
    let l = scenario
        .lutz
        .ok_or_else(|| CliError::validation("lutz", "required by `lutz`"))?;
    let result = lutz_compare(
        l.gamma0,
        l.lambda_high,
        l.lambda_low,
        l.t_hot,
        l.t_cold,
        l.family,
        &scenario.frequency_grid()?,
        &scenario.tolerances.order(),
    )?;
    Ok(order_outputs(&result))
}

fn dissipator(scenario: &Scenario) -> Result<(Value, Table)> {
    let system = scenario.require_system("dissipator")?;
    let kernel = scenario.kernel()?;
    let t = scenario.grids.t_max;
    let n_tau = scenario.grids.n_t;
    let delta = algebraic_dissipator(system, &kernel, t, n_tau)?;
    if let Some(warning) = &delta.warning {
        return Err(CliError::Numerical(warning.clone()));
    }
    let rates = rate_definiteness(system, &kernel, t, n_tau, scenario.grids.rate_steps)?;
    let (min_eig, max_eig) = delta.eig_extremes();
    let size = delta.matrix.nrows();
    let mut entries = Vec::with_capacity(size * size);
    let mut rows = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let z = delta.matrix[(i, j)];
            entries.push(json!([number(z.re), number(z.im)]));
            rows.push(vec![i as f64, j as f64, z.re, z.im]);
        }
    }
    let outputs = json!({
        "t": number(delta.time),
        "dim": delta.dim,
        "matrix": entries,
        "min_eig": number(min_eig),
        "max_eig": number(max_eig),
        "rate_definiteness": serde_json::to_value(&rates).expect("rates serialize"),
    });
    let table = Table::numeric(vec!["row".into(), "col".into(), "re".into(), "im".into()], rows);
    Ok((outputs, table))
}

fn evolve(request: &Request) -> Result<(Value, Table)> {
    let scenario = &request.scenario;
    let system = scenario.require_system("evolve")?;
    let rho0 = match (&request.rho0, &scenario.rho0) {
        (Some(given), _) => given.state.clone(),
        (None, Some(rho)) => rho.clone(),
        (None, None) => return Err(CliError::validation("rho0", "give --rho0 or a `rho0` section")),
    };
    if rho0.dim() != system.dim() {
        return Err(CliError::validation(
            "rho0",
            format!("state has dimension {} but the system {}", rho0.dim(), system.dim()),
        ));
    }
    let t_span = scenario.grids.t_max;
    let dt = request.dt.unwrap_or(scenario.grids.dt);
    let method = request.method.expect("checked");
    let trajectory: Trajectory = match method {
        Method::Master => {
            let options = MasterOptions {
                check_tolerance: scenario.tolerances.step_check,
                freq: None,
            };
            master_equation_evolve_with(system, &scenario.kernel()?, t_span, dt, &rho0, &options)?
        }
        Method::Magnus => magnus_trajectory(system, &scenario.kernel()?, t_span, dt, scenario.grids.n_t, &rho0)?,
        Method::Exact => {
            let bath = match scenario.environments.as_slice() {
                [Environment::DiscreteBath(bath)] => bath,
                _ => {
                    return Err(CliError::validation(
                        "environments",
                        "exact evolution needs exactly one discrete_bath environment",
                    ))
                }
            };
            exact_bath_trajectory(system, bath, t_span, dt, &rho0)?
        }
    };
    let table = Table::numeric(Trajectory::csv_header(system.dim()), trajectory.csv_rows());
    let outputs = json!({
        "method": method_name(method),
        "dim": system.dim(),
        "columns": table.columns,
        "rows": table.rows_json(),
    });
    Ok((outputs, table))
}

fn fdr_check(scenario: &Scenario) -> Result<(Value, Table)> {
    let kernel = scenario.kernel()?;
    let CorrelationKernel::Stationary(stationary) = &kernel else {
        unreachable!("scenario environments are stationary")
    };
    if kernel.channels() != 1 {
        return Err(CliError::validation("environments", "fdr-check needs a single channel"));
    }
    let mut reservoirs = Vec::new();
    for (k, env) in scenario.environments.iter().enumerate() {
        match env {
            Environment::Thermal(spec) => reservoirs.push(*spec),
            _ => {
                return Err(CliError::validation(
                    format!("environments[{k}]"),
                    "fdr-check needs thermal environments (damping kernel)",
                ))
            }
        }
    }
    let damping = |w: f64| reservoirs.iter().map(|r| r.damping(w)).sum::<f64>();
    let grid = scenario.frequency_grid()?;
    let fit = fdr_fit(stationary, damping, &grid)?;
    let kappa = effective_fdr_kernel(stationary, damping, &grid)?;
    let rows: Vec<Vec<f64>> = grid
        .points()
        .into_iter()
        .zip(kappa)
        .map(|(w, k)| vec![w, k, fdr_kernel(w, fit.t_star)])
        .collect();
    let table = Table::numeric(vec!["omega".into(), "kappa_eff".into(), "kappa_fit".into()], rows);
    let outputs = json!({
        "t_star": number(fit.t_star),
        "residual": number(fit.residual),
        "thermal": fit.residual < scenario.tolerances.fdr_residual,
        "columns": table.columns,
        "rows": table.rows_json(),
    });
    Ok((outputs, table))
}
