use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The index set `k ∈ {-a, …, a-1}²` with frequencies `2πk/λ`, optionally
/// shifted by `π/λ` to the cell midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub a: usize,
    pub lambda: f64,
    pub shifted: bool,
}

impl FrequencyGrid {
    pub fn new(a: usize, lambda: f64, shifted: bool) -> Result<Self> {
        if a == 0 {
            return Err(Error::invalid("grid half-size a must be at least 1"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid(format!("grid lambda must be positive, got {lambda}")));
        }
        Ok(FrequencyGrid { a, lambda, shifted })
    }

    pub fn shifted(a: usize, lambda: f64) -> Result<Self> {
        FrequencyGrid::new(a, lambda, true)
    }

    /// Points per axis, `2a`.
    pub fn side(&self) -> usize {
        2 * self.a
    }

    /// Number of grid frequencies, `(2a)²`.
    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing `2π/λ`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    /// One-dimensional frequency for integer index `k`.
    #[inline]
    pub fn coordinate(&self, k: i64) -> f64 {
        let base = 2.0 * PI * k as f64 / self.lambda;
        if self.shifted {
            base + PI / self.lambda
        } else {
            base
        }
    }

    /// Frequencies for `k = -a, …, a-1`, i.e. position `i` holds `k = i − a`.
    pub fn coordinates(&self) -> Vec<f64> {
        let a = self.a as i64;
        (-a..a).map(|k| self.coordinate(k)).collect()
    }

    /// All `(2a)²` frequency vectors, row-major in `(k₁, k₂)`.
    pub fn frequencies(&self) -> Vec<[f64; 2]> {
        let c = self.coordinates();
        c.iter().flat_map(|&x| c.iter().map(move |&y| [x, y])).collect()
    }

    /// Flat index of `(k₁, k₂)`.
    #[inline]
    pub fn index(&self, k1: i64, k2: i64) -> usize {
        let a = self.a as i64;
        ((k1 + a) as usize) * self.side() + (k2 + a) as usize
    }
}
