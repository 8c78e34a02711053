// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use deco_core::evolution::Method;

use crate::command::{run_command, Command, InitialState, Request};
use crate::error::{CliError, Result};
use crate::report::{emit_report, Format};
use crate::scenario::{load_scenario, parse_density_matrix};

#[derive(Parser, Debug)]
#[command(name = "deco", version, about = "Decoherence-strength ordering and open-system evolution")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall time in JSON reports (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Master,
    Magnus,
    Exact,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Master => Method::Master,
            MethodArg::Magnus => Method::Magnus,
            MethodArg::Exact => Method::Exact,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Tabulate the composite correlation kernel on the frequency grid.
    Kernels(Common),
    /// Order the environments of two scenarios.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scenario_b: PathBuf,
    },
    /// Two-reservoir cutoff/temperature comparison.
    Lutz(Common),
    /// Algebraic dissipator at t = grids.t_max.
    Dissipator(Common),
    /// Reduced-state trajectory on [0, grids.t_max].
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Initial density matrix (JSON rows of [re, im]); overrides the scenario's rho0.
        #[arg(long)]
        rho0: Option<PathBuf>,
        /// Time step; overrides grids.dt.
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Effective-temperature fit of the composite noise-to-damping ratio.
    FdrCheck(Common),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(cli: Cli) -> Result<()> {
    let (command, common) = match &cli.command {
        Commands::Kernels(c) => (Command::Kernels, c),
        Commands::Compare { common, .. } => (Command::Compare, common),
        Commands::Lutz(c) => (Command::Lutz, c),
        Commands::Dissipator(c) => (Command::Dissipator, c),
        Commands::Evolve { common, .. } => (Command::Evolve, common),
        Commands::FdrCheck(c) => (Command::FdrCheck, c),
    };
    let mut request = Request::new(command, load_scenario(&common.scenario)?);
    request.timing = common.timing;
    match &cli.command {
        Commands::Compare { scenario_b, .. } => request.scenario_b = Some(load_scenario(scenario_b)?),
        Commands::Evolve { method, rho0, dt, .. } => {
            request.method = Some((*method).into());
            request.dt = *dt;
            if let Some(path) = rho0 {
                let source = read(path)?;
                let state = parse_density_matrix(&source, "rho0")?;
                request.rho0 = Some(InitialState { source, state });
            }
        }
        _ => {}
    }
    let report = run_command(&request)?;
    emit_report(&report, common.format, common.out.as_deref())
}

/// Runs the `deco` command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
