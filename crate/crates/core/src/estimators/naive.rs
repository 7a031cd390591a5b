//! Literal quadruple-sum versions of the estimators, for small inputs only.
//!
//! These loop over the index sets directly and share nothing with the DFT code
//! beyond the taper and the grid coordinates. Three index sets appear:
//!
//! * `E`: all four indices pairwise distinct,
//! * `Ẽ`: `j₁≠j₂, j₁≠j₄, j₂≠j₃, j₃≠j₄` (the set the `D̂₁` bracket sums over),
//! * `Ẽ̃`: `j₁≠j₂, j₃≠j₄` (the set `ĉ₀²` sums over).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::efficient::radial_arguments;
use super::TestConfig;
use crate::error::{Error, Result};
use crate::field::SpatialSample;
use crate::oracles::bessel_j0;
use crate::spectral::FrequencyGrid;
use crate::taper::Taper;

pub const D1_MAX_N: usize = 12;
pub const D1_MAX_A: usize = 3;
pub const D2_MAX_N: usize = 10;
pub const D2_MAX_A: usize = 3;
pub const D2_MAX_A_R: usize = 4;

fn guard(what: &str, n: usize, max_n: usize, a: usize, max_a: usize) -> Result<()> {
    if n > max_n || a > max_a {
        return Err(Error::SizeGuard(format!(
            "{what} is limited to n <= {max_n} and a <= {max_a} (got n = {n}, a = {a})"
        )));
    }
    Ok(())
}

fn weights(sample: &SpatialSample, taper: &Taper) -> Vec<f64> {
    let lambda = sample.lambda();
    sample
        .locations()
        .iter()
        .zip(sample.values())
        .map(|(s, z)| taper.eval([s[0] / lambda, s[1] / lambda]) * z)
        .collect()
}

/// `e^{i s_j·ω_k}`, indexed `[k][j]`.
fn phases(sample: &SpatialSample, grid: &FrequencyGrid) -> Vec<Vec<Complex64>> {
    grid.frequencies()
        .iter()
        .map(|w| {
            sample
                .locations()
                .iter()
                .map(|s| Complex64::from_polar(1.0, s[0] * w[0] + s[1] * w[1]))
                .collect()
        })
        .collect()
}

fn real_part(z: Complex64, abs_sum: f64, what: &str) -> Result<f64> {
    if z.im.abs() <= 1e-9 * z.re.abs() || z.im.abs() <= 1e-12 * abs_sum {
        Ok(z.re)
    } else {
        Err(Error::invalid(format!(
            "{what}: sum is not real ({} + {}i)",
            z.re, z.im
        )))
    }
}

type Quad = fn(usize, usize, usize, usize) -> bool;

fn in_e(j1: usize, j2: usize, j3: usize, j4: usize) -> bool {
    j1 != j2 && j1 != j3 && j1 != j4 && j2 != j3 && j2 != j4 && j3 != j4
}

fn in_e_tilde(j1: usize, j2: usize, j3: usize, j4: usize) -> bool {
    j1 != j2 && j1 != j4 && j2 != j3 && j3 != j4
}

fn in_e_tilde_minus_e(j1: usize, j2: usize, j3: usize, j4: usize) -> bool {
    in_e_tilde(j1, j2, j3, j4) && !in_e(j1, j2, j3, j4)
}

fn in_e_dtilde(j1: usize, j2: usize, j3: usize, j4: usize) -> bool {
    j1 != j2 && j3 != j4
}

fn in_e_dtilde_minus_e(j1: usize, j2: usize, j3: usize, j4: usize) -> bool {
    in_e_dtilde(j1, j2, j3, j4) && !in_e(j1, j2, j3, j4)
}

/// `Σ_{J ∈ set} w₁w₂w₃w₄ e^{i(s₁−s₂+s₃−s₄)·ω}` at each frequency.
fn bracket_terms(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid, set: Quad) -> Vec<(Complex64, f64)> {
    let w = weights(sample, taper);
    let n = w.len();
    phases(sample, grid)
        .iter()
        .map(|e| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut abs = 0.0;
            for j1 in 0..n {
                for j2 in 0..n {
                    for j3 in 0..n {
                        for j4 in 0..n {
                            if !set(j1, j2, j3, j4) {
                                continue;
                            }
                            let c = w[j1] * w[j2] * w[j3] * w[j4];
                            acc += c * e[j1] * e[j2].conj() * e[j3] * e[j4].conj();
                            abs += c.abs();
                        }
                    }
                }
            }
            (acc, abs)
        })
        .collect()
}

fn d1_over(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid, set: Quad, what: &str) -> Result<f64> {
    guard(what, sample.len(), D1_MAX_N, grid.a, D1_MAX_A)?;
    let (mut acc, mut abs) = (Complex64::new(0.0, 0.0), 0.0);
    for (z, a) in bracket_terms(sample, taper, grid, set) {
        acc += z;
        abs += a;
    }
    let n = sample.len() as f64;
    let h0 = taper.h_zero();
    let pref = (2.0 * PI * grid.lambda).powi(2) / (2.0 * n.powi(4) * h0 * h0);
    Ok(pref * real_part(acc, abs, what)?)
}

/// `D̂₁` summed over pairwise distinct quadruples.
pub fn d1_naive(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<f64> {
    d1_over(sample, taper, grid, in_e, "d1_naive")
}

/// `D̂₁` summed over `Ẽ`; equal to the DFT-based value.
pub fn d1_naive_tilde(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<f64> {
    d1_over(sample, taper, grid, in_e_tilde, "d1_naive_tilde")
}

/// The `Ẽ ∖ E` part, so that `d1_naive + d1_complement = d1_naive_tilde`.
pub fn d1_complement(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<f64> {
    d1_over(sample, taper, grid, in_e_tilde_minus_e, "d1_complement")
}

/// The per-frequency bracket `Σ_{J∈Ẽ} …`, one real value per grid point.
pub fn d1_bracket_naive(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<Vec<f64>> {
    guard("d1_bracket_naive", sample.len(), D1_MAX_N, grid.a, D1_MAX_A)?;
    bracket_terms(sample, taper, grid, in_e_tilde)
        .into_iter()
        .map(|(z, a)| real_part(z, a, "d1_bracket_naive"))
        .collect()
}

/// `ĉ₀(ρ)` as the double loop `Σ_k Σ_{j₁≠j₂} w₁w₂ e^{i(s₁−s₂)·ω_k} J₀(ρ‖ω_k‖) / (n²H(0))`.
pub fn c0_naive(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid, r_values: &[f64]) -> Result<Vec<f64>> {
    guard("c0_naive", sample.len(), D1_MAX_N, grid.a, D1_MAX_A)?;
    let w = weights(sample, taper);
    let n = w.len();
    let freqs = grid.frequencies();
    let ph = phases(sample, grid);
    let scale = 1.0 / ((n * n) as f64 * taper.h_zero());
    r_values
        .iter()
        .map(|&rho| {
            let (mut acc, mut abs) = (Complex64::new(0.0, 0.0), 0.0);
            for (e, om) in ph.iter().zip(&freqs) {
                let j0 = bessel_j0(rho * om[0].hypot(om[1]));
                for j1 in 0..n {
                    for j2 in 0..n {
                        if j1 == j2 {
                            continue;
                        }
                        let c = w[j1] * w[j2] * j0;
                        acc += c * e[j1] * e[j2].conj();
                        abs += c.abs();
                    }
                }
            }
            Ok(scale * real_part(acc, abs, "c0_naive")?)
        })
        .collect()
}

fn d2_over(sample: &SpatialSample, taper: &Taper, config: &TestConfig, set: Quad, what: &str) -> Result<f64> {
    config.validate()?;
    guard(what, sample.len(), D2_MAX_N, config.a, D2_MAX_A)?;
    if config.a_r > D2_MAX_A_R {
        return Err(Error::SizeGuard(format!(
            "{what} is limited to a_r <= {D2_MAX_A_R} (got {})",
            config.a_r
        )));
    }
    let grid = FrequencyGrid::shifted(config.a, sample.lambda())?;
    let w = weights(sample, taper);
    let n = w.len();
    let freqs = grid.frequencies();
    let ph = phases(sample, &grid);
    let h0 = taper.h_zero();
    let pref = (2.0 * PI).powi(4) / ((n as f64).powi(4) * h0 * h0);

    let (mut total, mut total_abs) = (Complex64::new(0.0, 0.0), 0.0);
    for om_r in radial_arguments(config.a_r, config.lambda_r) {
        // g(j, j') = Σ_k e^{i(s_j − s_j')·ω_k} J₀(ω̃_r ‖ω_k‖)
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        let mut g_abs = vec![0.0; n * n];
        for (e, om) in ph.iter().zip(&freqs) {
            let j0 = bessel_j0(om_r * om[0].hypot(om[1]));
            for j in 0..n {
                for jp in 0..n {
                    g[j * n + jp] += j0 * e[j] * e[jp].conj();
                    g_abs[j * n + jp] += j0.abs();
                }
            }
        }
        let (mut acc, mut abs) = (Complex64::new(0.0, 0.0), 0.0);
        for j1 in 0..n {
            for j2 in 0..n {
                for j3 in 0..n {
                    for j4 in 0..n {
                        if !set(j1, j2, j3, j4) {
                            continue;
                        }
                        let c = w[j1] * w[j2] * w[j3] * w[j4];
                        acc += c * g[j1 * n + j2] * g[j3 * n + j4];
                        abs += c.abs() * g_abs[j1 * n + j2] * g_abs[j3 * n + j4];
                    }
                }
            }
        }
        total += om_r * pref * acc;
        total_abs += om_r * pref * abs;
    }
    Ok(real_part(total, total_abs, what)? / config.lambda_r)
}

/// `D̂₂` without truncation, summed over pairwise distinct quadruples.
pub fn d2_naive(sample: &SpatialSample, taper: &Taper, config: &TestConfig) -> Result<f64> {
    d2_over(sample, taper, config, in_e, "d2_naive")
}

/// `D̂₂` without truncation, summed over `Ẽ̃`; equal to the DFT-based value.
pub fn d2_naive_tilde(sample: &SpatialSample, taper: &Taper, config: &TestConfig) -> Result<f64> {
    d2_over(sample, taper, config, in_e_dtilde, "d2_naive_tilde")
}

/// The `Ẽ̃ ∖ E` part.
pub fn d2_complement(sample: &SpatialSample, taper: &Taper, config: &TestConfig) -> Result<f64> {
    d2_over(sample, taper, config, in_e_dtilde_minus_e, "d2_complement")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(n: usize) -> SpatialSample {
        let locs = (0..n).map(|j| [0.15 * j as f64 - 1.0, 0.7 - 0.1 * j as f64]).collect();
        let vals = (0..n).map(|j| 1.0 + 0.5 * j as f64).collect();
        SpatialSample::new(5.0, locs, vals).unwrap()
    }

    #[test]
    fn size_guards() {
        let t = Taper::default();
        let g = FrequencyGrid::shifted(2, 5.0).unwrap();
        assert!(matches!(d1_naive(&tiny(13), &t, &g), Err(Error::SizeGuard(_))));
        let g4 = FrequencyGrid::shifted(4, 5.0).unwrap();
        assert!(matches!(d1_naive(&tiny(4), &t, &g4), Err(Error::SizeGuard(_))));
        let cfg = TestConfig {
            a: 2,
            lambda: 5.0,
            a_r: 5,
            lambda_r: 10.0,
            ..TestConfig::default()
        };
        assert!(matches!(d2_naive(&tiny(4), &t, &cfg), Err(Error::SizeGuard(_))));
        let cfg = TestConfig { a_r: 2, ..cfg };
        assert!(matches!(d2_naive(&tiny(11), &t, &cfg), Err(Error::SizeGuard(_))));
        assert!(d2_naive(&tiny(5), &t, &cfg).is_ok());
    }

    #[test]
    fn fewer_than_four_points_have_no_distinct_quadruples() {
        let t = Taper::default();
        let g = FrequencyGrid::shifted(2, 5.0).unwrap();
        assert_eq!(d1_naive(&tiny(3), &t, &g).unwrap(), 0.0);
    }

    #[test]
    fn sets_nest() {
        for j in 0..256usize {
            let (a, b, c, d) = (j & 3, (j >> 2) & 3, (j >> 4) & 3, (j >> 6) & 3);
            if in_e(a, b, c, d) {
                assert!(in_e_tilde(a, b, c, d) && in_e_dtilde(a, b, c, d));
            }
            if in_e_tilde(a, b, c, d) {
                assert!(in_e_dtilde(a, b, c, d));
            }
        }
    }
}
