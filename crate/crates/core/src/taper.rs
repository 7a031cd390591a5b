//! Product data tapers on `[-1/2, 1/2]²`.
//!
//! A taper is the product of identical one-dimensional windows, so every
//! derived quantity (the `H` coefficients, the frequency window) factorises
//! over the two coordinates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracles::quadrature::integrate_adaptive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Taper {
    /// Indicator of `[-1/2, 1/2]`; kept for diagnostics only.
    Rectangular,
    /// `cos^α(π s)` on `[-1/2, 1/2]`, zero outside.
    CosinePower { alpha: u32 },
}

impl Default for Taper {
    fn default() -> Self {
        Taper::CosinePower { alpha: 3 }
    }
}

impl Taper {
    /// Whether the window is twice differentiable on the real line, which the
    /// bias bounds of the test statistic require (cosine powers with `α ≥ 3`).
    pub fn is_smooth_enough(&self) -> bool {
        matches!(*self, Taper::CosinePower { alpha } if alpha >= 3)
    }

    #[inline]
    pub fn eval_1d(&self, s: f64) -> f64 {
        if s.abs() > 0.5 {
            return 0.0;
        }
        match *self {
            Taper::Rectangular => 1.0,
            Taper::CosinePower { alpha } => (PI * s).cos().max(0.0).powi(alpha as i32),
        }
    }

    #[inline]
    pub fn eval(&self, s: [f64; 2]) -> f64 {
        self.eval_1d(s[0]) * self.eval_1d(s[1])
    }

    /// `H₁(m) = ∫_{-1/2}^{1/2} h²(s) e^{-2πism} ds`.
    ///
    /// For `cos^α` the binomial expansion of `cos^{2α}(πs)` gives
    /// `H₁(m) = C(2α, α − m) / 4^α` for `|m| ≤ α` and zero beyond.
    pub fn h_coefficient_1d(&self, m: i64) -> f64 {
        let alpha = match *self {
            Taper::Rectangular => 0,
            Taper::CosinePower { alpha } => alpha as i64,
        };
        if m.abs() > alpha {
            return 0.0;
        }
        binomial(2 * alpha as u64, (alpha - m) as u64) / 4f64.powi(alpha as i32)
    }

    /// `H₂(m) = H₁(m₁) H₁(m₂)`.
    pub fn h_coefficient(&self, m: [i64; 2]) -> f64 {
        self.h_coefficient_1d(m[0]) * self.h_coefficient_1d(m[1])
    }

    /// `H₂(0)`, the normaliser of the tapered DFT.
    pub fn h_zero(&self) -> f64 {
        self.h_coefficient([0, 0])
    }

    /// `Σ_{m ∈ [-a, a-1]²} H₂(m)^p`, factorised over coordinates.
    pub fn h_power_sum(&self, a: i64, p: i32) -> f64 {
        let one: f64 = (-a..a).map(|m| self.h_coefficient_1d(m).powi(p)).sum();
        one * one
    }

    /// One-dimensional frequency window `∫_{-λ/2}^{λ/2} h(s/λ) e^{-isu} ds`.
    ///
    /// The rectangular window has the closed form `λ sinc(λu/2)`; cosine powers are
    /// integrated adaptively to absolute tolerance 1e-10.
    pub fn frequency_window_1d(&self, lambda: f64, u: f64) -> Result<f64> {
        match *self {
            Taper::Rectangular => {
                let x = 0.5 * lambda * u;
                Ok(lambda * if x == 0.0 { 1.0 } else { x.sin() / x })
            }
            Taper::CosinePower { .. } => {
                // even integrand: 2 ∫_0^{λ/2} h(s/λ) cos(su) ds
                let half = 0.5 * lambda;
                let pieces = ((half * u.abs()) / PI).ceil().max(1.0) as usize;
                let width = half / pieces as f64;
                let mut total = 0.0;
                for p in 0..pieces {
                    let lo = p as f64 * width;
                    total += integrate_adaptive(
                        |s| self.eval_1d(s / lambda) * (s * u).cos(),
                        lo,
                        lo + width,
                        1e-10 / (2.0 * pieces as f64),
                    )?;
                }
                Ok(2.0 * total)
            }
        }
    }

    /// `B_λ(u) = ∫_{[-λ/2, λ/2]²} h(s/λ) e^{-is·u} ds`, real because `h` is even.
    pub fn frequency_window(&self, lambda: f64, u: [f64; 2]) -> Result<f64> {
        Ok(self.frequency_window_1d(lambda, u[0])? * self.frequency_window_1d(lambda, u[1])?)
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
