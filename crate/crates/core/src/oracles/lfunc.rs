//! Logarithmic envelope functions and numerical checks of their convolution
//! and summation inequalities.
//!
//! The inequality constants are not constructive, so the checks return the
//! largest observed ratio `LHS / RHS`; callers assert that it stays bounded.

use std::f64::consts::E;

use serde::Serialize;

use super::quadrature::integrate_adaptive;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LFunctionParams {
    pub s: u32,
    pub lambda: f64,
}

/// `(s/e)^s` with `0⁰ = 1`.
fn plateau(s: u32) -> f64 {
    if s == 0 {
        1.0
    } else {
        (s as f64 / E).powi(s as i32)
    }
}

/// `L_λ^{(s)}(u)`: `(s/e)^s λ` for `|u| ≤ e^s/λ`, `log^s(λ|u|)/|u|` beyond.
pub fn l_function(params: LFunctionParams, u: f64) -> f64 {
    let LFunctionParams { s, lambda } = params;
    let u = u.abs();
    if u <= E.powi(s as i32) / lambda {
        plateau(s) * lambda
    } else {
        (lambda * u).ln().powi(s as i32) / u
    }
}

/// `ℓ^{(s)}(u) = L_λ^{(s)}(u/λ)/λ`, which does not depend on `λ`.
pub fn ell_function(s: u32, u: f64) -> f64 {
    let u = u.abs();
    if u <= E.powi(s as i32) {
        plateau(s)
    } else {
        u.ln().powi(s as i32) / u
    }
}

/// `∫_ℝ L_λ^{(p)}(u) L_λ^{(q)}(v − u) du`.
pub fn l_convolution(p: u32, q: u32, lambda: f64, v: f64) -> Result<f64> {
    let lp = LFunctionParams { s: p, lambda };
    let lq = LFunctionParams { s: q, lambda };
    let f = |u: f64| l_function(lp, u) * l_function(lq, v - u);
    let kp = E.powi(p as i32) / lambda;
    let kq = E.powi(q as i32) / lambda;
    // kinks of both factors, plus a geometric ladder away from each centre so the
    // 1/|u| shoulders are resolved on every scale
    let mut points = vec![-kp, kp, v - kq, v + kq, 0.0, v];
    let span = 1e8 / lambda + 2.0 * v.abs();
    for centre in [0.0, v] {
        let mut d = kp.min(kq);
        while d < span {
            points.push(centre - d);
            points.push(centre + d);
            d *= 2.0;
        }
    }
    points.push(-span);
    points.push(span);
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + b.abs()));

    let scale = lambda.max(1.0);
    let mut total = 0.0;
    for w in points.windows(2) {
        total += integrate_adaptive(f, w[0], w[1], 1e-12 * scale)?;
    }
    // beyond ±span the integrand behaves like log^{p+q}(λ|u|)/u² on both sides
    let tail = 2.0 * (lambda * span).ln().powi((p + q) as i32) * (1.0 + (p + q) as f64) / span;
    Ok(total + tail)
}

/// Largest `∫ L^{(p)}(u) L^{(q)}(v−u) du / L^{(p+q+1)}(v)` over `v_grid`.
pub fn verify_l_convolution(p: u32, q: u32, lambda: f64, v_grid: &[f64]) -> Result<f64> {
    if p > 2 || q > 2 {
        return Err(Error::invalid("convolution check supports p, q ≤ 2"));
    }
    let rhs = LFunctionParams { s: p + q + 1, lambda };
    let mut worst: f64 = 0.0;
    for &v in v_grid {
        if !v.is_finite() {
            return Err(Error::invalid(format!("non-finite grid point {v}")));
        }
        worst = worst.max(l_convolution(p, q, lambda, v)? / l_function(rhs, v));
    }
    Ok(worst)
}

/// Terms `|m| ≤ L_SUM_RANGE` are summed explicitly.
pub const L_SUM_RANGE: i64 = 1_000_000;

/// `Σ_m ℓ^{(p)}(m) ℓ^{(q)}(m + r)` over `|m| ≤ 10⁶`, with a bound on the omitted tail.
pub fn l_sum(p: u32, q: u32, r: i64) -> (f64, f64) {
    let term = |m: i64| ell_function(p, m as f64) * ell_function(q, (m + r) as f64);
    let mut sum = term(0);
    let mut comp = 0.0;
    // ±m paired so that r and −r produce bit-identical sums
    for m in 1..=L_SUM_RANGE {
        // Kahan: two million positive terms spanning many magnitudes
        let y = (term(m) + term(-m)) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // each side: Σ_{m>M} log^{p+q}(2m)/(m(m−|r|)) ≤ 2·log^{p+q}(2M)·(p+q+1)/(M − |r|)
    let big_m = L_SUM_RANGE as f64;
    let tail = 2.0 * 2.0 * (2.0 * big_m).ln().powi((p + q) as i32) * (1.0 + (p + q) as f64) / (big_m - r.abs() as f64);
    (sum, tail)
}

/// Largest `Σ_m ℓ^{(p)}(m) ℓ^{(q)}(m+r) / ℓ^{(p+q+1)}(r)` over `r_grid`.
pub fn verify_l_sum(p: u32, q: u32, r_grid: &[i64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &r in r_grid {
        if r.abs() > 10_000 {
            return Err(Error::invalid(format!("|r| = {} exceeds 10⁴", r.abs())));
        }
        let (sum, tail) = l_sum(p, q, r);
        worst = worst.max((sum + tail) / ell_function(p + q + 1, r as f64));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_values() {
        assert_eq!(l_function(LFunctionParams { s: 0, lambda: 10.0 }, 0.0), 10.0);
        assert_eq!(l_function(LFunctionParams { s: 0, lambda: 10.0 }, 1.0), 1.0);
        let v = l_function(LFunctionParams { s: 1, lambda: E * E }, 1.0);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn continuous_at_kink() {
        for s in 0..4 {
            let lambda = 7.0;
            let k = E.powi(s as i32) / lambda;
            let p = LFunctionParams { s, lambda };
            let (a, b) = (l_function(p, k), l_function(p, k * (1.0 + 1e-12)));
            assert!((a - b).abs() <= 1e-9 * a, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn ell_is_rescaled_l() {
        for s in 0..4 {
            for lambda in [0.5, 3.0, 100.0] {
                for u in [0.0, 0.3, 1.0, 2.9, 15.0, 1e4] {
                    let via_l = l_function(LFunctionParams { s, lambda }, u / lambda) / lambda;
                    let direct = ell_function(s, u);
                    assert!(
                        (via_l - direct).abs() <= 1e-14 * direct.max(1.0),
                        "s={s} λ={lambda} u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn convolution_at_zero_matches_closed_form() {
        // p = q = 0, v = 0: ∫ L² = 2(λ + λ) = 4λ
        let c = l_convolution(0, 0, 10.0, 0.0).unwrap();
        assert!((c - 40.0).abs() < 1e-4, "{c}");
    }

    #[test]
    fn sum_is_symmetric_in_r() {
        assert_eq!(l_sum(0, 0, 12), l_sum(0, 0, -12));
        assert_eq!(l_sum(1, 0, 37), l_sum(1, 0, -37));
    }
}
