// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Uniform grids with trapezoid weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameters(format!("grid count {count} < 2")));
        }
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::InvalidParameters(format!(
                "grid bounds must satisfy max > min (got [{min}, {max}])"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        // Midpoint form keeps symmetric grids exactly symmetric, with 0 a node for odd counts.
        let n1 = (self.count - 1) as f64;
        let x = (2.0 * k as f64 - n1) / n1;
        let mid = 0.5 * (self.min + self.max);
        let half = 0.5 * (self.max - self.min);
        mid + half * x
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }

    /// Trapezoid weight of node `k`.
    pub fn weight(&self, k: usize) -> f64 {
        let h = self.spacing();
        if k == 0 || k + 1 == self.count {
            0.5 * h
        } else {
            h
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.weight(k)).collect()
    }
}

/// Frequency grid. Grids used for inverse transforms must be symmetric about 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid(pub UniformGrid);

impl FrequencyGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        UniformGrid::new(min, max, count).map(Self)
    }

    pub fn symmetric(omega_max: f64, count: usize) -> Result<Self> {
        Self::new(-omega_max, omega_max, count)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.0.min + self.0.max).abs() <= 1e-12 * self.0.max.abs()
    }

    /// Transform grid covering thermal scale `temperature`, cutoff `cutoff` and
    /// lags in `[s_min, s_max]`: Ω ≥ max(50T, 20Λ, 20/s_min), dω ≤ π/(10 s_max).
    /// The node count is odd so that ω = 0 is a node.
    pub fn for_transform(temperature: f64, cutoff: f64, s_min: f64, s_max: f64) -> Result<Self> {
        if !(s_min > 0.0 && s_max >= s_min) {
            return Err(Error::InvalidParameters(format!(
                "transform lags need 0 < s_min <= s_max (got {s_min}, {s_max})"
            )));
        }
        let omega_max = (50.0 * temperature).max(20.0 * cutoff).max(20.0 / s_min);
        let max_spacing = std::f64::consts::PI / (10.0 * s_max);
        let mut count = (2.0 * omega_max / max_spacing).ceil() as usize + 1;
        if count % 2 == 0 {
            count += 1;
        }
        Self::symmetric(omega_max, count.max(3))
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.0
    }
    pub fn count(&self) -> usize {
        self.0.count
    }
    pub fn spacing(&self) -> f64 {
        self.0.spacing()
    }
    pub fn point(&self, k: usize) -> f64 {
        self.0.point(k)
    }
    pub fn points(&self) -> Vec<f64> {
        self.0.points()
    }
    pub fn weights(&self) -> Vec<f64> {
        self.0.weights()
    }
    pub fn max(&self) -> f64 {
        self.0.max
    }
    pub fn min(&self) -> f64 {
        self.0.min
    }

    /// Every other node (same endpoints); used for Richardson error estimates.
    pub fn coarsened(&self) -> Option<Self> {
        if self.0.count >= 5 && self.0.count % 2 == 1 {
            Some(Self(UniformGrid {
                min: self.0.min,
                max: self.0.max,
                count: (self.0.count + 1) / 2,
            }))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid(pub UniformGrid);

impl TimeGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        UniformGrid::new(min, max, count).map(Self)
    }

    /// `[0, t]` with `count` nodes.
    pub fn span(t: f64, count: usize) -> Result<Self> {
        Self::new(0.0, t, count)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.0
    }
    pub fn count(&self) -> usize {
        self.0.count
    }
    pub fn spacing(&self) -> f64 {
        self.0.spacing()
    }
    pub fn point(&self, k: usize) -> f64 {
        self.0.point(k)
    }
    pub fn points(&self) -> Vec<f64> {
        self.0.points()
    }
    pub fn weight(&self, k: usize) -> f64 {
        self.0.weight(k)
    }
    pub fn weights(&self) -> Vec<f64> {
        self.0.weights()
    }

    pub fn same_as(&self, other: &TimeGrid) -> bool {
        self.0.count == other.0.count
            && (self.0.min - other.0.min).abs() <= 1e-12 * (1.0 + self.0.min.abs())
            && (self.0.max - other.0.max).abs() <= 1e-12 * (1.0 + self.0.max.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
        assert!(UniformGrid::new(1.0, 1.0, 5).is_err());
        assert!(UniformGrid::new(2.0, 1.0, 5).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let g = UniformGrid::new(-1.0, 3.0, 9).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - 4.0).abs() < 1e-14);
    }

    #[test]
    fn transform_grid_follows_heuristic() {
        let g = FrequencyGrid::for_transform(2.0, 5.0, 0.1, 4.0).unwrap();
        assert!(g.is_symmetric());
        assert!(g.max() >= 200.0);
        assert!(g.spacing() <= std::f64::consts::PI / 40.0 + 1e-15);
        assert_eq!(g.count() % 2, 1);
        assert_eq!(g.point(g.count() / 2), 0.0);
    }
}
