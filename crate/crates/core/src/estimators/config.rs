use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taper::Taper;

/// Grid and level settings of the isotropy test.
///
/// The `(a, lambda)` grid carries the periodogram sums; the `(a_r, lambda_r)`
/// grid only supplies the radial arguments `ω̃_{r,λ_r}` of the covariance
/// estimate `ĉ₀` and the outer `r`-sum of `D̂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestConfig {
    pub a: usize,
    pub lambda: f64,
    pub a_r: usize,
    pub lambda_r: f64,
    pub alpha_level: f64,
    pub taper: Taper,
    pub truncate_c0: bool,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            a: 80,
            lambda: 30.0,
            a_r: 800,
            lambda_r: 300.0,
            alpha_level: 0.05,
            taper: Taper::default(),
            truncate_c0: true,
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.a == 0 {
            return Err(Error::invalid("a must be at least 1"));
        }
        if self.a_r == 0 {
            return Err(Error::invalid("a_r must be at least 1"));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::invalid(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.lambda_r.is_finite() && self.lambda_r > 0.0) {
            return Err(Error::invalid(format!(
                "lambda_r must be positive, got {}",
                self.lambda_r
            )));
        }
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return Err(Error::invalid(format!(
                "alpha_level must lie in (0, 1), got {}",
                self.alpha_level
            )));
        }
        Ok(())
    }

    /// Upper end `2πa/λ` of the frequency box.
    pub fn frequency_cutoff(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.a as f64 / self.lambda
    }

    /// Upper end `2πa_r/λ_r` of the radial grid.
    pub fn radial_cutoff(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.a_r as f64 / self.lambda_r
    }
}

/// Outcome of one isotropy test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub n: usize,
    pub d1_hat: f64,
    pub d2_hat: f64,
    /// `d1_hat − d2_hat`.
    pub m_hat: f64,
    /// Bias-corrected variance estimate after clamping at zero.
    pub tau_h0_sq_hat: f64,
    pub tau_h0_sq_unclamped: f64,
    /// `λ M̂ / τ̂`.
    pub statistic: f64,
    /// `z_{1−α}`.
    pub critical: f64,
    /// `1 − Φ(statistic)`.
    pub p_value: f64,
    /// `statistic > critical` (strict).
    pub reject: bool,
    /// Number of radial terms kept in `D̂₂`.
    pub radial_terms: usize,
    /// First radial index with `ĉ₀ < 0` when truncation is on and a sign change occurred.
    pub c0_truncation_index: Option<usize>,
}
