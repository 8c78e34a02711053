// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI invocation, each mapped onto one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("usage: {0}")]
    Usage(String),

    /// Structurally malformed scenario: bad JSON, unknown or missing field.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// Well-formed scenario whose values break a model invariant.
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Core(#[from] deco_core::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl std::fmt::Display) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }

    /// 0 success, 1 I/O or usage, 2 invalid input, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 1,
            CliError::Schema { .. } | CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
