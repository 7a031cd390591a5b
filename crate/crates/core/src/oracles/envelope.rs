//! Diagnostic check of the product envelope `f(ω) ≤ β_{1+δ}(ω)`.
//!
//! `β_δ(ω) = Π_i C·min(1, |ω_i|^{-δ})`. On a finite grid a constant always
//! exists, so the check asks whether it has stabilised: the constant needed on
//! the box `[-W, W]²` may exceed the one needed on `[-W/2, W/2]²` by at most
//! [`GROWTH_LIMIT`]. A density decaying more slowly than the envelope keeps
//! demanding larger constants as the box grows.

use serde::Serialize;

use crate::field::CovarianceModel;

pub const GROWTH_LIMIT: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeGrid {
    /// Half-width `W` of the outer box.
    pub extent: f64,
    /// Grid points per axis on the outer box.
    pub points: usize,
}

impl Default for EnvelopeGrid {
    fn default() -> Self {
        EnvelopeGrid {
            extent: 200.0,
            points: 801,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeReport {
    /// Constant fitted on `[-W/2, W/2]²`.
    pub inner_constant: f64,
    /// Constant fitted on `[-W, W]²`.
    pub outer_constant: f64,
    pub holds: bool,
}

fn shape(exponent: f64, w: f64) -> f64 {
    let a = w.abs();
    if a <= 1.0 {
        1.0
    } else {
        a.powf(-exponent)
    }
}

/// Fits `C` for `f ≤ β_{1+δ}` on nested boxes and reports whether it stabilised.
pub fn beta_envelope_report(model: &CovarianceModel, delta: f64, grid: &EnvelopeGrid) -> EnvelopeReport {
    let exponent = 1.0 + delta;
    let n = grid.points.max(3);
    let step = 2.0 * grid.extent / (n - 1) as f64;
    let half = grid.extent / 2.0;
    let mut inner: f64 = 0.0;
    let mut outer: f64 = 0.0;
    for i in 0..n {
        let x = -grid.extent + step * i as f64;
        for j in 0..n {
            let y = -grid.extent + step * j as f64;
            // the shape's tail is a power law, so compare in logs to stay finite
            let ratio = model.spectral_density([x, y]).ln() - shape(exponent, x).ln() - shape(exponent, y).ln();
            let c = ratio.exp();
            outer = outer.max(c);
            if x.abs() <= half && y.abs() <= half {
                inner = inner.max(c);
            }
        }
    }
    EnvelopeReport {
        inner_constant: inner,
        outer_constant: outer,
        holds: outer.is_finite() && outer <= GROWTH_LIMIT * inner,
    }
}

pub fn beta_envelope_check(model: &CovarianceModel, delta: f64, grid: &EnvelopeGrid) -> bool {
    beta_envelope_report(model, delta, grid).holds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_smooth_matern_pass() {
        let g = EnvelopeGrid::default();
        assert!(beta_envelope_check(
            &CovarianceModel::gaussian_aniso(1.0).unwrap(),
            3.0,
            &g
        ));
        assert!(beta_envelope_check(
            &CovarianceModel::matern(3.0, 1.0).unwrap(),
            3.0,
            &g
        ));
    }

    #[test]
    fn rough_matern_reported() {
        // f ~ ‖ω‖^{-5} cannot sit under |ω₁ω₂|^{-4} along the diagonal
        let r = beta_envelope_report(
            &CovarianceModel::matern(1.5, 1.0).unwrap(),
            3.0,
            &EnvelopeGrid::default(),
        );
        assert!(r.outer_constant > r.inner_constant);
        assert!(!r.holds);
    }
}
