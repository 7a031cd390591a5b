//! Irregularly sampled Gaussian random fields.

mod model;
mod simulate;

pub use model::{log_scaled_bessel_k, matern_correlation, CovarianceModel};
pub use simulate::{covariance_matrix, simulate_field, FieldDraw, JITTER_LADDER};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::Seed;

/// Observations `Z(s_j)` at locations `s_j ∈ [-λ/2, λ/2]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialSample {
    lambda: f64,
    locations: Vec<[f64; 2]>,
    values: Vec<f64>,
}

impl SpatialSample {
    pub fn new(lambda: f64, locations: Vec<[f64; 2]>, values: Vec<f64>) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
        }
        if locations.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} locations but {} values",
                locations.len(),
                values.len()
            )));
        }
        let half = lambda / 2.0;
        for (j, s) in locations.iter().enumerate() {
            if !s.iter().all(|c| c.is_finite() && c.abs() <= half) {
                return Err(Error::invalid(format!(
                    "location {j} = {s:?} lies outside [-{half}, {half}]²"
                )));
            }
        }
        if let Some(j) = values.iter().position(|z| !z.is_finite()) {
            return Err(Error::invalid(format!("value {j} is not finite")));
        }
        Ok(SpatialSample {
            lambda,
            locations,
            values,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn locations(&self) -> &[[f64; 2]] {
        &self.locations
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same locations, values multiplied by `c`.
    pub fn scaled(&self, c: f64) -> SpatialSample {
        SpatialSample {
            lambda: self.lambda,
            locations: self.locations.clone(),
            values: self.values.iter().map(|z| c * z).collect(),
        }
    }

    /// Reorders the `(s_j, Z_j)` pairs; `order` must be a permutation of `0..n`.
    pub fn permuted(&self, order: &[usize]) -> SpatialSample {
        SpatialSample {
            lambda: self.lambda,
            locations: order.iter().map(|&j| self.locations[j]).collect(),
            values: order.iter().map(|&j| self.values[j]).collect(),
        }
    }
}

/// `n` points i.i.d. uniform on `[-λ/2, λ/2]²`.
pub fn sample_locations(n: usize, lambda: f64, seed: Seed) -> Result<Vec<[f64; 2]>> {
    if n == 0 {
        return Err(Error::invalid("need at least one location"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    let mut rng = seed.rng();
    let half = lambda / 2.0;
    Ok((0..n)
        .map(|_| {
            let x: f64 = rng.random_range(-half..=half);
            let y: f64 = rng.random_range(-half..=half);
            [x, y]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_in_range() {
        let p = sample_locations(1, 2.0, Seed::new(0, 0)).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].iter().all(|c| (-1.0..=1.0).contains(c)));
    }

    #[test]
    fn uniform_moments() {
        // sd of the mean is λ/√(12n) = 0.087, so 0.3 is about 3.5σ
        let p = sample_locations(10_000, 30.0, Seed::new(11, 0)).unwrap();
        for axis in 0..2 {
            let mean = p.iter().map(|s| s[axis]).sum::<f64>() / p.len() as f64;
            assert!(mean.abs() < 0.3, "axis {axis} mean {mean}");
            assert!(p.iter().all(|s| s[axis].abs() <= 15.0));
        }
    }

    #[test]
    fn deterministic() {
        let a = sample_locations(50, 30.0, Seed::new(5, 9)).unwrap();
        let b = sample_locations(50, 30.0, Seed::new(5, 9)).unwrap();
        assert_eq!(a, b);
        let c = sample_locations(50, 30.0, Seed::new(5, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn argument_errors() {
        assert!(sample_locations(0, 1.0, Seed::new(0, 0)).is_err());
        assert!(sample_locations(3, 0.0, Seed::new(0, 0)).is_err());
        assert!(sample_locations(3, -1.0, Seed::new(0, 0)).is_err());
    }

    #[test]
    fn sample_validation() {
        assert!(SpatialSample::new(2.0, vec![[0.0, 0.0]], vec![1.0, 2.0]).is_err());
        assert!(SpatialSample::new(2.0, vec![[1.5, 0.0]], vec![1.0]).is_err());
        assert!(SpatialSample::new(2.0, vec![[1.0, -1.0]], vec![1.0]).is_ok());
    }
}
