//! Population quantities the estimators converge to, by quadrature in the
//! frequency plane.
//!
//! Everything is computed on the disc `‖ω‖ ≤ cutoff` with a polar product rule.
//! The radial (Hankel) transforms `F(ρ) = ∫ f(ω) J₀(ρ‖ω‖) dω` are formed from
//! the angular integrals `Θ(t) = ∫₀^{2π} f(t cos θ, t sin θ) dθ` as
//! `F(ρ) = ∫₀^∞ t J₀(ρt) Θ(t) dt`, and outer `ρ` integrals run to the lag where
//! the covariance is below 1e-12 of its variance.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::bessel::bessel_j0;
use super::quadrature::{pairwise_sum, PanelRule, PolarRule, QuadratureSpec};
use crate::error::{Error, Result};
use crate::field::CovarianceModel;
use crate::taper::Taper;

/// A quadrature value with its self-convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadEstimate {
    /// Value at the refined (doubled) rule.
    pub value: f64,
    /// `|refined − base|`.
    pub refinement_change: f64,
    /// Integral over the annulus `[cutoff, 2·cutoff]`, a proxy for the truncated tail.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D2Estimate {
    /// `(2π)⁻¹ ∫₀^∞ F(ρ)² ρ dρ` through the Bessel transform.
    pub value: f64,
    /// `2π ∫₀^∞ f̄(t)² t dt` with `f̄` the angular mean of `f`; equal to `value` by Hankel–Parseval.
    pub angular_route: f64,
    pub refinement_change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct M2Estimate {
    pub d1: f64,
    pub d2: f64,
    /// `max(D₁ − D₂, 0)`.
    pub m2: f64,
    /// Unclamped `D₁ − D₂`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauLimits {
    pub tau1_sq: f64,
    pub tau2_sq: f64,
    pub kappa12: f64,
    /// `τ₁² + τ₂² − 2κ`.
    pub tau_sq: f64,
    pub tau_h0_sq: f64,
    /// `∫ f⁴`.
    pub f4_integral: f64,
    /// `Σ H(m)²/H(0)²` over the truncated index range.
    pub h2_weight: f64,
    /// `Σ H(m)⁴/H(0)⁴` over the truncated index range.
    pub h4_weight: f64,
}

/// Relative mismatch of `τ²` and `τ²_{H₀}` tolerated for isotropic models.
pub const ISOTROPY_TAU_TOL: f64 = 5e-3;

fn cutoff(model: &CovarianceModel, spec: &QuadratureSpec) -> f64 {
    spec.cutoff.unwrap_or_else(|| model.spectral_cutoff())
}

/// Smallest lag radius beyond which `|c(h)| < 1e-12 c(0)` in every direction
/// (scanned along 64 directions with step 0.05).
pub fn lag_cutoff(model: &CovarianceModel) -> f64 {
    let c0 = model.variance();
    let mut worst: f64 = 0.0;
    for j in 0..64 {
        let (s, c) = (PI * j as f64 / 64.0).sin_cos();
        let mut rho = 0.0;
        let mut last_big = 0.0;
        while rho < 500.0 {
            rho += 0.05;
            if model.covariance_unchecked([rho * c, rho * s]).abs() >= 1e-12 * c0 {
                last_big = rho;
            } else if rho > 2.0 * last_big + 1.0 {
                break;
            }
        }
        worst = worst.max(last_big + 0.05);
    }
    worst
}

/// `Σ_{|m_i| ≤ m_cutoff} H(m)^p / H(0)^p`, for `p = 2` and `p = 4`.
pub fn h_weight_sums(taper: &Taper, m_cutoff: i64) -> (f64, f64) {
    let h0 = taper.h_coefficient_1d(0);
    let one = |p: i32| -> f64 {
        (-m_cutoff..=m_cutoff)
            .map(|m| (taper.h_coefficient_1d(m) / h0).powi(p))
            .sum()
    };
    let (s2, s4) = (one(2), one(4));
    (s2 * s2, s4 * s4)
}

fn check_converged(what: &str, base: f64, refined: f64, tol: f64) -> Result<f64> {
    let change = (refined - base).abs();
    if !refined.is_finite() || change > tol * refined.abs().max(1e-300) {
        return Err(Error::QuadratureFailure(format!(
            "{what}: refined value {refined:e} differs from {base:e} by {change:e} (tolerance {tol:e} relative)"
        )));
    }
    Ok(change)
}

/// `∫ g(ω) dω` over the cutoff disc, checked against the doubled rule.
pub fn disc_integral(g: impl Fn([f64; 2]) -> f64 + Sync, cutoff: f64, spec: &QuadratureSpec) -> Result<QuadEstimate> {
    let at = |s: &QuadratureSpec| PolarRule::new(cutoff, s.panels, s.angles).integrate(&g);
    let base = at(spec);
    let fine = spec.refined();
    let value = at(&fine);
    let refinement_change = check_converged("disc integral", base, value, spec.tol)?;
    let tail_estimate = PolarRule::annulus(cutoff, 2.0 * cutoff, spec.panels, spec.angles).integrate(&g);
    Ok(QuadEstimate {
        value,
        refinement_change,
        tail_estimate,
    })
}

/// `D₁ = ∫ f²`.
pub fn population_d1(model: &CovarianceModel, spec: &QuadratureSpec) -> Result<QuadEstimate> {
    model.validate()?;
    disc_integral(|w| model.spectral_density(w).powi(2), cutoff(model, spec), spec)
}

/// Radial quadrature data shared by the Hankel transforms.
struct Hankel {
    /// Radial nodes `t_i` of the frequency disc.
    t: Vec<f64>,
    /// `w_i t_i`.
    wt: Vec<f64>,
    /// Outer lag nodes `ρ_o` and weights `W_o ρ_o`.
    rho: Vec<f64>,
    wrho: Vec<f64>,
    rule: PolarRule,
}

impl Hankel {
    fn new(cutoff: f64, rho_max: f64, spec: &QuadratureSpec) -> Self {
        let rule = PolarRule::new(cutoff, spec.panels, spec.angles);
        let t = rule.radial.nodes.clone();
        let wt = t.iter().zip(&rule.radial.weights).map(|(t, w)| t * w).collect();
        let outer = PanelRule::new(0.0, rho_max, spec.panels, 16);
        let wrho = outer.nodes.iter().zip(&outer.weights).map(|(r, w)| r * w).collect();
        Hankel {
            t,
            wt,
            rho: outer.nodes,
            wrho,
            rule,
        }
    }

    fn angular(&self, g: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
        self.rule.angular_integrals(g)
    }

    /// `F(ρ_o) = Σ_i w_i t_i J₀(ρ_o t_i) Θ(t_i)` at every outer node.
    fn forward(&self, theta: &[f64]) -> Vec<f64> {
        self.rho
            .par_iter()
            .map(|&rho| {
                let terms: Vec<f64> = self
                    .t
                    .iter()
                    .zip(&self.wt)
                    .zip(theta)
                    .map(|((&t, &wt), &th)| wt * bessel_j0(rho * t) * th)
                    .collect();
                pairwise_sum(&terms)
            })
            .collect()
    }

    /// `G(t_i) = Σ_o W_o ρ_o J₀(ρ_o t_i) F(ρ_o)` at every radial node.
    fn inverse(&self, big_f: &[f64]) -> Vec<f64> {
        self.t
            .par_iter()
            .map(|&t| {
                let terms: Vec<f64> = self
                    .rho
                    .iter()
                    .zip(&self.wrho)
                    .zip(big_f)
                    .map(|((&rho, &w), &f)| w * bessel_j0(rho * t) * f)
                    .collect();
                pairwise_sum(&terms)
            })
            .collect()
    }

    fn radial_sum(&self, g: impl Fn(usize) -> f64) -> f64 {
        pairwise_sum(&(0..self.t.len()).map(|i| self.wt[i] * g(i)).collect::<Vec<_>>())
    }

    fn outer_sum(&self, g: impl Fn(usize) -> f64) -> f64 {
        pairwise_sum(&(0..self.rho.len()).map(|o| self.wrho[o] * g(o)).collect::<Vec<_>>())
    }
}

fn d2_routes(f: &(impl Fn([f64; 2]) -> f64 + Sync), cutoff: f64, rho_max: f64, spec: &QuadratureSpec) -> (f64, f64) {
    let hk = Hankel::new(cutoff, rho_max, spec);
    let theta = hk.angular(f);
    let big_f = hk.forward(&theta);
    let bessel = hk.outer_sum(|o| big_f[o] * big_f[o]) / (2.0 * PI);
    let angular = hk.radial_sum(|i| theta[i] * theta[i]) / (2.0 * PI);
    (bessel, angular)
}

/// `D₂ = (2π)⁻¹ ∫₀^∞ (∫ f(ω) J₀(ρ‖ω‖) dω)² ρ dρ` for a generic density.
pub fn d2_of(
    f: impl Fn([f64; 2]) -> f64 + Sync,
    cutoff: f64,
    rho_max: f64,
    spec: &QuadratureSpec,
) -> Result<D2Estimate> {
    let (base, _) = d2_routes(&f, cutoff, rho_max, spec);
    let (value, angular_route) = d2_routes(&f, cutoff, rho_max, &spec.refined());
    let refinement_change = check_converged("D2 (Bessel route)", base, value, spec.tol)?;
    Ok(D2Estimate {
        value,
        angular_route,
        refinement_change,
    })
}

pub fn population_d2(model: &CovarianceModel, spec: &QuadratureSpec) -> Result<D2Estimate> {
    model.validate()?;
    d2_of(
        |w| model.spectral_density(w),
        cutoff(model, spec),
        lag_cutoff(model),
        spec,
    )
}

pub fn population_m2(model: &CovarianceModel, spec: &QuadratureSpec) -> Result<M2Estimate> {
    let d1 = population_d1(model, spec)?.value;
    let d2 = population_d2(model, spec)?.value;
    let residual = d1 - d2;
    Ok(M2Estimate {
        d1,
        d2,
        m2: residual.max(0.0),
        residual,
    })
}

fn tau_parts(
    model: &CovarianceModel,
    cutoff: f64,
    rho_max: f64,
    weights: (f64, f64),
    spec: &QuadratureSpec,
) -> TauLimits {
    let (a2, a4) = weights;
    let f = |w: [f64; 2]| model.spectral_density(w);
    let hk = Hankel::new(cutoff, rho_max, spec);
    let theta1 = hk.angular(f);
    let theta2 = hk.angular(|w| f(w).powi(2));
    let theta3 = hk.angular(|w| f(w).powi(3));
    let theta4 = hk.angular(|w| f(w).powi(4));
    let big_f = hk.forward(&theta1);
    let big_f3 = hk.forward(&theta3);
    let g = hk.inverse(&big_f);

    let f4_integral = hk.radial_sum(|i| theta4[i]);
    let two_pi_sq = (2.0 * PI).powi(2);
    let tau1_sq = two_pi_sq * (8.0 * a2 + 2.0 * a4) * f4_integral;
    let tau2_sq = 8.0 * a2 * hk.radial_sum(|i| theta2[i] * g[i] * g[i]);
    let kappa12 = 16.0 * PI * a2 * hk.outer_sum(|o| big_f[o] * big_f3[o]);
    TauLimits {
        tau1_sq,
        tau2_sq,
        kappa12,
        tau_sq: tau1_sq + tau2_sq - 2.0 * kappa12,
        tau_h0_sq: 2.0 * two_pi_sq * a4 * f4_integral,
        f4_integral,
        h2_weight: a2,
        h4_weight: a4,
    }
}

/// The limits `τ₁²`, `τ₂²`, `κ₁₂`, `τ²` and `τ²_{H₀}` of the variance of `M̂`,
/// with the `m`-sums truncated at `|m_i| ≤ m_cutoff`.
///
/// For an isotropic model `τ²` must agree with `τ²_{H₀}` to [`ISOTROPY_TAU_TOL`];
/// a larger gap means the quadrature is unresolved and is reported as a failure.
pub fn population_tau_limits(
    model: &CovarianceModel,
    taper: &Taper,
    m_cutoff: i64,
    spec: &QuadratureSpec,
) -> Result<TauLimits> {
    model.validate()?;
    let cut = cutoff(model, spec);
    let rho_max = lag_cutoff(model);
    let weights = h_weight_sums(taper, m_cutoff);
    let base = tau_parts(model, cut, rho_max, weights, spec);
    let fine = tau_parts(model, cut, rho_max, weights, &spec.refined());
    check_converged("tau^2", base.tau_sq, fine.tau_sq, spec.tol.max(1e-7))?;
    check_converged("tau_H0^2", base.tau_h0_sq, fine.tau_h0_sq, spec.tol)?;
    if model.is_isotropic() {
        let gap = (fine.tau_sq - fine.tau_h0_sq).abs() / fine.tau_h0_sq;
        if gap > ISOTROPY_TAU_TOL {
            return Err(Error::QuadratureFailure(format!(
                "isotropic model but tau^2 = {:e} and tau_H0^2 = {:e} differ by {gap:e} relative",
                fine.tau_sq, fine.tau_h0_sq
            )));
        }
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn d1_gaussian_closed_form() {
        let m = CovarianceModel::gaussian_aniso(1.0).unwrap();
        let d1 = population_d1(&m, &spec()).unwrap();
        assert!((d1.value - PI.powi(3) / 2.0).abs() < 1e-4, "{d1:?}");
        assert!(d1.tail_estimate < 1e-6);
    }

    #[test]
    fn d1_anisotropic_self_consistent() {
        let m = CovarianceModel::gaussian_aniso(2.0).unwrap();
        let a = population_d1(&m, &spec()).unwrap();
        let b = population_d1(&m, &spec().refined()).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-10);
        // the determinant of the anisotropy scales ∫f² by r
        assert_relative_eq!(a.value, 2.0 * PI.powi(3) / 2.0, max_relative = 1e-6);
    }

    #[test]
    fn d1_homogeneous_of_degree_two() {
        let m = CovarianceModel::gaussian_aniso(1.0).unwrap();
        let s = spec();
        let base = disc_integral(|w| m.spectral_density(w).powi(2), 12.0, &s)
            .unwrap()
            .value;
        let scaled = disc_integral(|w| (3.0 * m.spectral_density(w)).powi(2), 12.0, &s)
            .unwrap()
            .value;
        assert_relative_eq!(scaled, 9.0 * base, max_relative = 1e-13);
    }

    #[test]
    fn isotropy_forces_d2_equal_d1() {
        for m in [
            CovarianceModel::gaussian_aniso(1.0).unwrap(),
            CovarianceModel::matern(3.0, 1.0).unwrap(),
        ] {
            let r = population_m2(&m, &spec()).unwrap();
            assert!(r.residual.abs() <= 2e-3 * r.d1, "{m:?}: {r:?}");
        }
    }

    #[test]
    fn bessel_and_angular_routes_agree() {
        let m = CovarianceModel::gaussian_aniso(3.0).unwrap();
        let d2 = population_d2(&m, &spec()).unwrap();
        assert_relative_eq!(d2.value, d2.angular_route, max_relative = 1e-8);
    }

    #[test]
    fn distance_grows_with_anisotropy() {
        let m2: Vec<f64> = [2.0, 3.0, 4.0]
            .iter()
            .map(|&r| {
                population_m2(&CovarianceModel::gaussian_aniso(r).unwrap(), &spec())
                    .unwrap()
                    .m2
            })
            .collect();
        let d1_r2 = population_d1(&CovarianceModel::gaussian_aniso(2.0).unwrap(), &spec())
            .unwrap()
            .value;
        assert!(m2[0] > 1e-3 * d1_r2, "{m2:?}");
        assert!(m2[0] < m2[1] && m2[1] < m2[2], "{m2:?}");
    }

    #[test]
    fn h_weights_for_cos3() {
        let t = Taper::CosinePower { alpha: 3 };
        let (_, a4) = h_weight_sums(&t, 3);
        let r = |x: f64| (x / (5.0 / 16.0)).powi(4);
        let one = 1.0 + 2.0 * (r(15.0 / 64.0) + r(3.0 / 32.0) + r(1.0 / 64.0));
        assert_relative_eq!(a4, one * one, max_relative = 1e-14);
        // coefficients vanish beyond α, so a wider truncation changes nothing
        assert_eq!(h_weight_sums(&t, 3), h_weight_sums(&t, 80));
    }

    #[test]
    fn tau_limits_gaussian_null() {
        let m = CovarianceModel::gaussian_aniso(1.0).unwrap();
        let t = Taper::CosinePower { alpha: 3 };
        let lim = population_tau_limits(&m, &t, 80, &spec()).unwrap();
        assert_relative_eq!(lim.f4_integral, PI.powi(5) / 64.0, max_relative = 1e-8);
        let want = 2.0 * (2.0 * PI).powi(2) * lim.h4_weight * PI.powi(5) / 64.0;
        assert_relative_eq!(lim.tau_h0_sq, want, max_relative = 1e-8);
        assert!((lim.tau_sq - lim.tau_h0_sq).abs() <= 5e-3 * lim.tau_h0_sq, "{lim:?}");
        assert!(lim.tau1_sq > 0.0 && lim.tau2_sq > 0.0 && lim.tau_sq >= 0.0);
    }

    #[test]
    fn tau_limits_anisotropic_nonnegative() {
        let m = CovarianceModel::gaussian_aniso(3.0).unwrap();
        let lim = population_tau_limits(&m, &Taper::default(), 10, &spec()).unwrap();
        assert!(lim.tau1_sq > 0.0 && lim.tau2_sq > 0.0 && lim.tau_sq >= 0.0, "{lim:?}");
    }

    #[test]
    fn lag_cutoffs() {
        let g = lag_cutoff(&CovarianceModel::gaussian_aniso(1.0).unwrap());
        // exp(-4ρ²) = 1e-12 at ρ ≈ 2.63
        assert!((g - 2.63).abs() < 0.1, "{g}");
        let g4 = lag_cutoff(&CovarianceModel::gaussian_aniso(4.0).unwrap());
        assert!(g4 > 3.5 * g);
    }
}
