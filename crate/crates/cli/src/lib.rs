// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: scenario files in, deterministic JSON/CSV reports out.
//!
//! Exit codes: 0 success, 1 I/O or usage error, 2 invalid scenario or flags,
//! 3 numerical failure.

mod cli;
pub mod command;
pub mod error;
pub mod format;
pub mod report;
pub mod scenario;

pub use cli::run;
pub use command::{run_command, Command, InitialState, Request, TOOL_VERSION};
pub use error::{CliError, Result};
pub use report::{emit_report, Format, Report, Table};
pub use scenario::{load_scenario, parse_density_matrix, parse_scenario, Environment, Scenario};
