//! Covariance kernels and their spectral densities.
//!
//! Spectral densities use the convention `f(ω) = ∫ c(h) e^{-iω·h} dh` with the
//! inverse transform carrying `(2π)^{-2}`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CovarianceModel {
    /// `c(h) = exp(-4 ‖A_r h‖²)` with `A_r = diag(1, 1/r) · Rot(π/4)`; isotropic at `r = 1`.
    GaussianAniso { r: f64 },
    /// Unit-variance Matérn kernel with smoothness `nu` and length scale `ell`.
    Matern { nu: f64, ell: f64 },
}

impl CovarianceModel {
    pub fn gaussian_aniso(r: f64) -> Result<Self> {
        let m = CovarianceModel::GaussianAniso { r };
        m.validate()?;
        Ok(m)
    }

    pub fn matern(nu: f64, ell: f64) -> Result<Self> {
        let m = CovarianceModel::Matern { nu, ell };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CovarianceModel::GaussianAniso { r } => {
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::invalid(format!("anisotropy ratio r must be positive, got {r}")));
                }
            }
            CovarianceModel::Matern { nu, ell } => {
                if !(nu.is_finite() && nu > 0.0) {
                    return Err(Error::invalid(format!("Matérn nu must be positive, got {nu}")));
                }
                if !(ell.is_finite() && ell > 0.0) {
                    return Err(Error::invalid(format!("Matérn ell must be positive, got {ell}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_isotropic(&self) -> bool {
        match *self {
            CovarianceModel::GaussianAniso { r } => r == 1.0,
            CovarianceModel::Matern { .. } => true,
        }
    }

    /// Marginal variance `c(0)`.
    pub fn variance(&self) -> f64 {
        1.0
    }

    /// Covariance at lag `h`.
    pub fn covariance(&self, h: [f64; 2]) -> Result<f64> {
        if !(h[0].is_finite() && h[1].is_finite()) {
            return Err(Error::invalid(format!("non-finite lag {h:?}")));
        }
        Ok(self.covariance_unchecked(h))
    }

    /// Covariance without the finiteness check; the simulation hot loop uses this.
    #[inline]
    pub fn covariance_unchecked(&self, h: [f64; 2]) -> f64 {
        match *self {
            CovarianceModel::GaussianAniso { r } => {
                let (u, v) = rotate(h);
                let v = v / r;
                (-4.0 * (u * u + v * v)).exp()
            }
            CovarianceModel::Matern { nu, ell } => {
                let d = (h[0] * h[0] + h[1] * h[1]).sqrt();
                matern_correlation(nu, (2.0 * nu).sqrt() * d / ell)
            }
        }
    }

    pub fn spectral_density(&self, omega: [f64; 2]) -> f64 {
        match *self {
            CovarianceModel::GaussianAniso { r } => {
                let (u, v) = rotate(omega);
                let q = u * u + r * r * v * v;
                PI * r / 4.0 * (-q / 16.0).exp()
            }
            CovarianceModel::Matern { nu, ell } => {
                // Printed constant, evaluated at angular frequency ω (the printed
                // argument 4π²‖ξ‖² is in cycles, ξ = ω/2π).
                let w2 = omega[0] * omega[0] + omega[1] * omega[1];
                let two_nu = 2.0 * nu;
                let constant = 4.0 * PI * gamma(nu + 1.0) * two_nu.powf(nu) / (gamma(nu) * ell.powf(two_nu));
                constant * (two_nu / (ell * ell) + w2).powf(-(nu + 1.0))
            }
        }
    }

    /// Radius beyond which the spectral density is negligible for population quadrature.
    pub fn spectral_cutoff(&self) -> f64 {
        match *self {
            CovarianceModel::GaussianAniso { .. } => 12.0,
            CovarianceModel::Matern { nu, ell } => {
                // f(t)/f(0) = (1 + ℓ² t² / 2ν)^{-(ν+1)} < 1e-10
                let ratio = 1e-10f64.powf(-1.0 / (nu + 1.0));
                ((ratio - 1.0) * 2.0 * nu / (ell * ell)).sqrt()
            }
        }
    }
}

/// Rotation by π/4 in the kernel's convention: `(cos h₁ + sin h₂, −sin h₁ + cos h₂)`.
#[inline]
fn rotate(h: [f64; 2]) -> (f64, f64) {
    (FRAC_1_SQRT_2 * (h[0] + h[1]), FRAC_1_SQRT_2 * (h[1] - h[0]))
}

/// `2^{1-ν}/Γ(ν) · x^ν K_ν(x)`, equal to 1 at `x = 0`.
pub fn matern_correlation(nu: f64, x: f64) -> f64 {
    if x < 1e-12 {
        return 1.0;
    }
    let log_prefactor = (1.0 - nu) * std::f64::consts::LN_2 - statrs::function::gamma::ln_gamma(nu);
    (log_prefactor + log_scaled_bessel_k(nu, x)).exp()
}

/// `ln(x^ν K_ν(x))` from `K_ν(x) = ∫₀^∞ exp(-x cosh t) cosh(νt) dt`.
///
/// The integrand is entire and decays double-exponentially, so the trapezoid rule
/// with step 0.2 is accurate to roughly 1e-13 relative.
pub fn log_scaled_bessel_k(nu: f64, x: f64) -> f64 {
    const STEP: f64 = 0.2;
    let log_x_nu = nu * x.ln();
    // exponent of the dominant branch at t: ν ln x − x cosh t + ν t
    let exponent = |t: f64| log_x_nu - x * t.cosh() + nu * t;
    // locate the peak to shift exponents and avoid overflow
    let mut peak = f64::NEG_INFINITY;
    let mut t = 0.0;
    loop {
        let e = exponent(t);
        peak = peak.max(e);
        if e < peak - 60.0 || t > 700.0 {
            break;
        }
        t += STEP;
    }
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let t = k as f64 * STEP;
        let base = log_x_nu - x * t.cosh() - peak;
        let term = 0.5 * ((base + nu * t).exp() + (base - nu * t).exp());
        let weight = if k == 0 { 0.5 } else { 1.0 };
        sum += weight * term;
        if base + nu * t < -60.0 && k > 0 {
            break;
        }
        k += 1;
    }
    peak + (sum * STEP).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_values() {
        let m = CovarianceModel::gaussian_aniso(1.0).unwrap();
        assert_eq!(m.covariance([0.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(m.covariance([0.5, 0.0]).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(m.spectral_density([0.0, 0.0]), PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn anisotropy_visible_on_diagonals() {
        let m = CovarianceModel::gaussian_aniso(2.0).unwrap();
        let s = FRAC_1_SQRT_2;
        let a = m.covariance([s, s]).unwrap();
        let b = m.covariance([s, -s]).unwrap();
        // (1,1)/√2 rotates onto the first axis, (1,-1)/√2 onto the second (shrunk by 1/r)
        assert_relative_eq!(a, (-4.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(b, (-1.0f64).exp(), epsilon = 1e-15);
        assert!((a - b).abs() > 0.3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CovarianceModel::gaussian_aniso(0.0).is_err());
        assert!(CovarianceModel::matern(-1.0, 1.0).is_err());
        assert!(CovarianceModel::matern(1.0, f64::NAN).is_err());
        let m = CovarianceModel::gaussian_aniso(1.0).unwrap();
        assert!(m.covariance([f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn bessel_k_half_integer_closed_forms() {
        // K_{1/2}(x) = sqrt(π/2x) e^{-x};  K_{3/2}(x) = sqrt(π/2x) e^{-x} (1 + 1/x)
        for &x in &[1e-3, 0.1, 0.7, 2.0, 10.0, 40.0] {
            let k12 = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let k32 = k12 * (1.0 + 1.0 / x);
            let got12 = (log_scaled_bessel_k(0.5, x) - 0.5 * x.ln()).exp();
            let got32 = (log_scaled_bessel_k(1.5, x) - 1.5 * x.ln()).exp();
            assert_relative_eq!(got12, k12, max_relative = 1e-12);
            assert_relative_eq!(got32, k32, max_relative = 1e-12);
        }
    }

    #[test]
    fn bessel_k_integer_order_reference() {
        // reference values from a 30-digit evaluation (mpmath.besselk)
        let cases = [
            (3.0, 1.0, 7.101262824737945),
            (3.0, 2.449489742783178, 0.29172087386202245),
            (0.0, 1.0, 0.42102443824070834),
            (1.0, 5.0, 0.004044613445452165),
        ];
        for (nu, x, want) in cases {
            let got = (log_scaled_bessel_k(nu, x) - nu * f64::ln(x)).exp();
            assert_relative_eq!(got, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn matern_limit_and_decay() {
        assert_eq!(matern_correlation(3.0, 0.0), 1.0);
        assert_relative_eq!(matern_correlation(3.0, 1e-6), 1.0, epsilon = 1e-9);
        // ν = 1/2 is the exponential kernel
        assert_relative_eq!(matern_correlation(0.5, 1.3), (-1.3f64).exp(), max_relative = 1e-12);
        let m = CovarianceModel::matern(3.0, 1.0).unwrap();
        assert!(m.covariance([1.0, 0.0]).unwrap() < 1.0);
        assert_relative_eq!(m.spectral_density([0.0, 0.0]), 2.0 * PI, max_relative = 1e-13);
    }
}
