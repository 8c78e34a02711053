// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, hermitize, is_finite, trace, CMatrix};

/// Tolerance on trace, Hermiticity and positivity of user-supplied states.
pub const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates trace 1, Hermiticity and positivity within [`STATE_TOL`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and non-empty (got {}x{})",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !is_finite(&matrix) {
            return Err(Error::InvalidState("density matrix has non-finite entries".into()));
        }
        let asym = (&matrix - matrix.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if asym > STATE_TOL {
            return Err(Error::InvalidState(format!("density matrix is not Hermitian (deviation {asym:.3e})")));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("density matrix trace is {tr}, expected 1")));
        }
        let matrix = hermitize(&matrix);
        let min = eigvalsh(&matrix)[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// |ψ⟩⟨ψ| for a normalized copy of `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("state vector must be non-empty with finite non-zero norm".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        let d = v.len();
        Ok(Self {
            matrix: CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()),
        })
    }

    /// Wraps a propagated state without the strict checks; the matrix is
    /// Hermitized.
    pub(crate) fn from_evolved(matrix: &CMatrix) -> Self {
        Self {
            matrix: hermitize(matrix),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigvalsh(&self.matrix)[0]
    }
}

/// D(ρ₁, ρ₂) = ½ Σ |λ_k(ρ₁ − ρ₂)|.
///
/// # Panics
/// If the two states have different dimensions.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    assert_eq!(rho1.dim(), rho2.dim(), "trace distance needs states of equal dimension");
    let diff = rho1.matrix() - rho2.matrix();
    0.5 * eigvalsh(&diff).iter().map(|l| l.abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Master,
    Magnus,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    /// Column names: t, rho_re_ij, rho_im_ij (row-major), trace, purity.
    pub fn csv_header(dim: usize) -> Vec<String> {
        let mut cols = vec!["t".to_string()];
        for i in 0..dim {
            for j in 0..dim {
                cols.push(format!("rho_re_{i}{j}"));
                cols.push(format!("rho_im_{i}{j}"));
            }
        }
        cols.push("trace".into());
        cols.push("purity".into());
        cols
    }

    /// One numeric row per checkpoint, matching [`Trajectory::csv_header`].
    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, rho)| {
                let d = rho.dim();
                let mut row = vec![t];
                for i in 0..d {
                    for j in 0..d {
                        row.push(rho.matrix()[(i, j)].re);
                        row.push(rho.matrix()[(i, j)].im);
                    }
                }
                row.push(rho.trace());
                row.push(rho.purity());
                row
            })
            .collect()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectories hold at least the initial state")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};

    #[test]
    fn rejects_invalid_states() {
        let bad_trace = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), ZERO, ZERO, c(-0.5, 0.0)]);
        assert!(DensityMatrix::new(negative).is_err());
        let skew = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(skew).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let plus = DensityMatrix::pure(&[ONE, ONE]).unwrap();
        let minus = DensityMatrix::pure(&[ONE, -ONE]).unwrap();
        assert_eq!(trace_distance(&plus, &plus), 0.0);
        assert!((trace_distance(&plus, &minus) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let rho = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let traj = Trajectory {
            method: Method::Exact,
            times: vec![0.0],
            states: vec![rho],
        };
        assert_eq!(Trajectory::csv_header(2).len(), traj.csv_rows()[0].len());
        assert_eq!(Trajectory::csv_header(2)[1], "rho_re_00");
    }
}
