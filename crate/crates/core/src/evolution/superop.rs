// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::linalg::{hermitize, is_finite, sandwich, unvectorize, vectorize, CMatrix};

/// d²×d² matrix acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: CMatrix,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let dd = dim * dim;
        if matrix.nrows() != dd || matrix.ncols() != dd {
            return Err(Error::InvalidParameters(format!(
                "superoperator on dimension {dim} must be {dd}x{dd} (got {}x{})",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    /// Superoperator of an arbitrary linear map, built column by column.
    pub fn from_map(dim: usize, map: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let dd = dim * dim;
        let mut matrix = CMatrix::zeros(dd, dd);
        for col in 0..dd {
            let mut basis = CMatrix::zeros(dim, dim);
            basis[(col % dim, col / dim)] = crate::linalg::ONE;
            matrix.set_column(col, &vectorize(&map(&basis)));
        }
        Self { dim, matrix }
    }

    /// ρ ↦ UρU†
    pub fn unitary(u: &CMatrix) -> Self {
        Self {
            dim: u.nrows(),
            matrix: sandwich(u, &u.adjoint()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim)
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Matrix exponential (scaling and squaring).
    pub fn exp(&self) -> Result<Self> {
        if !is_finite(&self.matrix) {
            return Err(Error::ExponentialDivergence);
        }
        let matrix = self.matrix.exp();
        if !is_finite(&matrix) {
            return Err(Error::ExponentialDivergence);
        }
        Ok(Self { dim: self.dim, matrix })
    }

    /// max_kl |Tr S(e_kl)| for generators, max_kl |Tr S(e_kl) − δ_kl| for maps.
    pub fn trace_defect(&self, is_map: bool) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for k in 0..d {
            for l in 0..d {
                let col = self.matrix.column(k + l * d);
                let tr: num_complex::Complex64 = (0..d).map(|i| col[i + i * d]).sum();
                let target = if is_map && k == l { 1.0 } else { 0.0 };
                worst = worst.max((tr - target).norm());
            }
        }
        worst
    }
}

/// C[(i,k),(j,l)] = ⟨i|map(e_kl)|j⟩ with row index i·d + k, Hermitized.
/// C ⪰ 0 exactly when the map is completely positive.
pub fn choi_matrix(map: &SuperOperator) -> CMatrix {
    let d = map.dim();
    let mut c = CMatrix::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            let image = unvectorize(&map.matrix().column(k + l * d).into_owned(), d);
            for i in 0..d {
                for j in 0..d {
                    c[(i * d + k, j * d + l)] = image[(i, j)];
                }
            }
        }
    }
    hermitize(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eigvalsh, max_abs};

    #[test]
    fn identity_choi_is_maximally_entangled_projector() {
        for d in [2, 3] {
            let ev = eigvalsh(&choi_matrix(&SuperOperator::identity(d)));
            assert!((ev[ev.len() - 1] - d as f64).abs() < 1e-14);
            assert!(ev[..ev.len() - 1].iter().all(|e| e.abs() < 1e-14));
        }
    }

    #[test]
    fn transpose_is_not_completely_positive() {
        let t = SuperOperator::from_map(2, |m| m.transpose());
        let ev = eigvalsh(&choi_matrix(&t));
        assert!((ev[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn from_map_matches_apply() {
        let a = CMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64));
        let s = SuperOperator::from_map(2, |m| &a * m * a.adjoint());
        let rho = CMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 1.0));
        assert!(max_abs(&(s.apply(&rho) - &a * &rho * a.adjoint())) < 1e-14);
        assert!(max_abs(&(s.matrix() - SuperOperator::unitary(&a).matrix())) < 1e-14);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = SuperOperator::zeros(2).exp().unwrap();
        assert_eq!(e, SuperOperator::identity(2));
    }
}
