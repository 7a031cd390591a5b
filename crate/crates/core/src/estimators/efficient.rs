//! DFT-based evaluation of the test statistics.
//!
//! Writing `w_j = h(s_j/λ) Z_j`, `d_j = w_j²`, `S = Σ w_j e^{i s_j·ω}`,
//! `D = Σ d_j` and `T = Σ d_j w_j e^{i s_j·ω}`, the sum of
//! `w_{j₁} w̄_{j₂} w_{j₃} w̄_{j₄}` over quadruples with `j₁≠j₂, j₁≠j₄, j₂≠j₃, j₃≠j₄` is
//!
//! ```text
//! B = (|S|² − D)² − 2 Σ_j d_j |S − w_j e^{i s_j·ω}|² + (D² − Σ d_j²)
//! ```
//!
//! by inclusion–exclusion on the two forbidden coincidences, and the middle
//! term expands to `D|S|² − 2 Re(S̄ T) + Σ d_j²`. Every statistic below is a
//! weighted sum of `B`, `B²`, `|S|² − D` or `|S|⁸` over the grid.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::normal::decide;
use super::{TestConfig, TestResult};
use crate::error::{Error, Result};
use crate::field::SpatialSample;
use crate::oracles::bessel_j0;
use crate::oracles::quadrature::pairwise_sum;
use crate::spectral::{density_periodogram, FrequencyGrid, TaperedDftField};
use crate::taper::Taper;

/// `B(ω_k)` at every grid frequency.
pub fn d1_bracket(dft: &TaperedDftField) -> Vec<f64> {
    let d = dft.diag_weight();
    let d2 = dft.diag_weight_sq();
    let r = d * d - d2;
    dft.values()
        .iter()
        .zip(dft.cubic_values())
        .map(|(s, t)| {
            let s2 = s.norm_sqr();
            let p = s2 - d;
            let q = d * s2 - 2.0 * (s.conj() * t).re + d2;
            p * p - 2.0 * q + r
        })
        .collect()
}

fn check_sample(sample: &SpatialSample, min_n: usize) -> Result<()> {
    if sample.len() < min_n {
        return Err(Error::invalid(format!(
            "need at least {min_n} points, got {}",
            sample.len()
        )));
    }
    Ok(())
}

fn lean_dft(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<TaperedDftField> {
    TaperedDftField::compute(sample, taper, grid, false)
}

/// `(2πλ)² / (2 n⁴ H(0)²) Σ_k B(ω_k)`.
pub fn d1_from_dft(dft: &TaperedDftField) -> f64 {
    let n = dft.n() as f64;
    let h0 = dft.taper().h_zero();
    let lambda = dft.grid().lambda;
    let pref = (2.0 * PI * lambda).powi(2) / (2.0 * n.powi(4) * h0 * h0);
    pref * pairwise_sum(&d1_bracket(dft))
}

pub fn d1_efficient(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<f64> {
    check_sample(sample, 2)?;
    Ok(d1_from_dft(&lean_dft(sample, taper, grid)?))
}

/// `F̂ = (1/24)(2π/λ)² Σ_k I(ω_k)⁴` on the density scale `I = λ²|S|²/(n²H(0))`.
pub fn f4_from_dft(dft: &TaperedDftField) -> f64 {
    let lambda = dft.grid().lambda;
    let fourth: Vec<f64> = density_periodogram(dft).iter().map(|i| i.powi(4)).collect();
    (2.0 * PI / lambda).powi(2) / 24.0 * pairwise_sum(&fourth)
}

pub fn f4_hat(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<f64> {
    check_sample(sample, 1)?;
    Ok(f4_from_dft(&lean_dft(sample, taper, grid)?))
}

/// Variance estimate with its clamping record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauEstimate {
    pub value: f64,
    pub unclamped: f64,
    pub clamped: bool,
}

impl TauEstimate {
    fn new(unclamped: f64) -> Self {
        TauEstimate {
            value: unclamped.max(0.0),
            unclamped,
            clamped: unclamped <= 0.0,
        }
    }
}

/// `Σ_{m ∈ [-a, a-1]²} H(m)⁴`.
fn h4_sum(dft: &TaperedDftField) -> f64 {
    dft.taper().h_power_sum(dft.grid().a as i64, 4)
}

/// `(2π)⁴ λ⁶ / (12 n⁸ H(0)⁸) Σ_m H(m)⁴ Σ_k B(ω_k)²`.
pub fn tau_biascorrected_from_dft(dft: &TaperedDftField) -> TauEstimate {
    let n = dft.n() as f64;
    let h0 = dft.taper().h_zero();
    let lambda = dft.grid().lambda;
    let sq: Vec<f64> = d1_bracket(dft).iter().map(|b| b * b).collect();
    // grouped to keep intermediate magnitudes in range for large n
    let pref = (2.0 * PI).powi(4) * lambda.powi(6) / 12.0 / (n.powi(4) * h0.powi(4)).powi(2);
    TauEstimate::new(pref * h4_sum(dft) * pairwise_sum(&sq))
}

/// `2 (2π)² F̂ Σ_m H(m)⁴ / H(0)⁴`, the estimate without bias correction.
pub fn tau_plain_from_dft(dft: &TaperedDftField) -> TauEstimate {
    let h0 = dft.taper().h_zero();
    TauEstimate::new(2.0 * (2.0 * PI).powi(2) * f4_from_dft(dft) * h4_sum(dft) / h0.powi(4))
}

pub fn tau_h0_biascorrected(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<TauEstimate> {
    check_sample(sample, 4)?;
    Ok(tau_biascorrected_from_dft(&lean_dft(sample, taper, grid)?))
}

pub fn tau_h0_plain(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<TauEstimate> {
    check_sample(sample, 1)?;
    Ok(tau_plain_from_dft(&lean_dft(sample, taper, grid)?))
}

/// Grid frequencies grouped by `‖ω_k‖`, so `J₀(ρ‖ω_k‖)` is evaluated once per
/// distinct norm.
///
/// On the shifted grid `‖ω̃_k‖ = (π/λ) √((2k₁+1)² + (2k₂+1)²)`, which depends on the
/// unordered pair `{|2k₁+1|, |2k₂+1|}`: `a(a+1)/2` classes instead of `4a²` points.
#[derive(Debug, Clone)]
pub struct NormClasses {
    class_of: Vec<u32>,
    radii: Vec<f64>,
}

impl NormClasses {
    pub fn new(grid: &FrequencyGrid) -> Self {
        let a = grid.a as i64;
        let width = (2 * a + 1) as usize;
        let odd = |k: i64| if grid.shifted { (2 * k + 1).unsigned_abs() } else { (2 * k).unsigned_abs() } as usize;
        let mut slot = vec![u32::MAX; width * width];
        let mut radii = Vec::new();
        let mut class_of = Vec::with_capacity(grid.len());
        for k1 in -a..a {
            for k2 in -a..a {
                let (u, v) = (odd(k1), odd(k2));
                let (lo, hi) = (u.min(v), u.max(v));
                let key = lo * width + hi;
                if slot[key] == u32::MAX {
                    slot[key] = radii.len() as u32;
                    radii.push(PI / grid.lambda * ((lo * lo + hi * hi) as f64).sqrt());
                }
                class_of.push(slot[key]);
            }
        }
        NormClasses { class_of, radii }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Sums `values` (one per grid frequency) within each class.
    pub fn fold(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.radii.len()];
        for (&c, v) in self.class_of.iter().zip(values) {
            out[c as usize] += v;
        }
        out
    }
}

/// `ω̃_{r,λ_r} = 2πr/λ_r + π/λ_r` for `r = 0, …, a_r − 1`.
pub fn radial_arguments(a_r: usize, lambda_r: f64) -> Vec<f64> {
    (0..a_r).map(|r| (2.0 * PI * r as f64 + PI) / lambda_r).collect()
}

/// `ĉ₀(ρ) = Σ_k (|S(ω_k)|² − D) J₀(ρ‖ω_k‖) / (n² H(0))` for each `ρ` in `r_values`.
pub fn c0_from_dft(dft: &TaperedDftField, r_values: &[f64]) -> Vec<f64> {
    let classes = NormClasses::new(dft.grid());
    let folded = folded_periodogram(dft, &classes);
    r_values
        .iter()
        .map(|&rho| {
            let terms: Vec<f64> = classes
                .radii()
                .iter()
                .zip(&folded)
                .map(|(w, g)| bessel_j0(rho * w) * g)
                .collect();
            pairwise_sum(&terms)
        })
        .collect()
}

/// Class sums of `(|S|² − D)/(n² H(0))`.
fn folded_periodogram(dft: &TaperedDftField, classes: &NormClasses) -> Vec<f64> {
    let n = dft.n() as f64;
    let scale = 1.0 / (n * n * dft.taper().h_zero());
    let d = dft.diag_weight();
    let p: Vec<f64> = dft.values().iter().map(|s| (s.norm_sqr() - d) * scale).collect();
    classes.fold(&p)
}

pub fn c0_hat(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid, r_values: &[f64]) -> Result<Vec<f64>> {
    check_sample(sample, 1)?;
    if r_values.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::invalid("radii must be finite and nonnegative"));
    }
    if r_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("radii must be increasing"));
    }
    Ok(c0_from_dft(&lean_dft(sample, taper, grid)?, r_values))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D2Estimate {
    pub value: f64,
    /// Radial terms summed (`R`).
    pub terms: usize,
    /// `Some(R)` when truncation stopped the sum at the first negative `ĉ₀`.
    pub truncation_index: Option<usize>,
}

impl D2Estimate {
    /// `R = 0`: the very first `ĉ₀` was negative and `D̂₂` is set to zero.
    pub fn is_empty(&self) -> bool {
        self.terms == 0
    }
}

/// `(2π)⁴/λ_r Σ_{r<R} ω̃_r ĉ₀(ω̃_r)²` given `ĉ₀` on the radial arguments.
fn d2_from_c0(c0: impl Iterator<Item = f64>, radial: &[f64], lambda_r: f64, truncate: bool) -> D2Estimate {
    let mut terms = Vec::with_capacity(radial.len());
    let mut truncation_index = None;
    for (r, (c, w)) in c0.zip(radial).enumerate() {
        if truncate && c < 0.0 {
            truncation_index = Some(r);
            break;
        }
        terms.push(w * c * c);
    }
    D2Estimate {
        value: (2.0 * PI).powi(4) / lambda_r * pairwise_sum(&terms),
        terms: terms.len(),
        truncation_index,
    }
}

pub fn d2_efficient(sample: &SpatialSample, taper: &Taper, config: &TestConfig) -> Result<D2Estimate> {
    config.validate()?;
    check_sample(sample, 2)?;
    let grid = FrequencyGrid::shifted(config.a, sample.lambda())?;
    let dft = lean_dft(sample, taper, &grid)?;
    let radial = radial_arguments(config.a_r, config.lambda_r);
    let c0 = c0_from_dft(&dft, &radial);
    Ok(d2_from_c0(c0.into_iter(), &radial, config.lambda_r, config.truncate_c0))
}

/// Every intermediate of the test before the decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Statistics {
    pub n: usize,
    pub d1_hat: f64,
    pub d2: D2Estimate,
    pub tau: TauEstimate,
}

impl Statistics {
    pub fn m_hat(&self) -> f64 {
        self.d1_hat - self.d2.value
    }
}

/// The test with its `J₀` table precomputed for one configuration, so repeated
/// calls (Monte Carlo replications) only pay for the DFT and the sums.
#[derive(Debug, Clone)]
pub struct IsotropyTest {
    config: TestConfig,
    grid: FrequencyGrid,
    classes: NormClasses,
    radial: Vec<f64>,
    /// `J₀(ω̃_r ‖ω_c‖)`, row `r`, column class `c`.
    j0: Vec<f64>,
}

/// Reason given when a taper without the required smoothness is supplied.
pub const RECTANGULAR_REFUSAL: &str = "the rectangular taper (and any cosine power below 3) is refused: \
in two or more dimensions its edge-effect bias decays more slowly than the 1/lambda standard deviation \
of the statistic, so the bias is not asymptotically negligible; use a cosine taper with alpha >= 3";

impl IsotropyTest {
    pub fn new(config: TestConfig) -> Result<Self> {
        config.validate()?;
        if !config.taper.is_smooth_enough() {
            return Err(Error::Refused(RECTANGULAR_REFUSAL.to_string()));
        }
        let grid = FrequencyGrid::shifted(config.a, config.lambda)?;
        let classes = NormClasses::new(&grid);
        let radial = radial_arguments(config.a_r, config.lambda_r);
        let nc = classes.len();
        let mut j0 = vec![0.0; radial.len() * nc];
        j0.par_chunks_mut(nc).zip(radial.par_iter()).for_each(|(row, &rho)| {
            for (slot, w) in row.iter_mut().zip(classes.radii()) {
                *slot = bessel_j0(rho * w);
            }
        });
        Ok(IsotropyTest {
            config,
            grid,
            classes,
            radial,
            j0,
        })
    }

    pub fn config(&self) -> &TestConfig {
        &self.config
    }

    fn check_domain(&self, sample: &SpatialSample) -> Result<()> {
        check_sample(sample, 4)?;
        let (a, b) = (sample.lambda(), self.config.lambda);
        if (a - b).abs() > 1e-12 * b {
            return Err(Error::invalid(format!(
                "sample lambda {a} differs from the configured lambda {b}"
            )));
        }
        Ok(())
    }

    /// `ĉ₀` on the radial grid, computed lazily so truncation can stop early.
    fn c0_row(&self, folded: &[f64], r: usize) -> f64 {
        let nc = self.classes.len();
        let row = &self.j0[r * nc..(r + 1) * nc];
        pairwise_sum(&row.iter().zip(folded).map(|(j, g)| j * g).collect::<Vec<_>>())
    }

    pub fn statistics(&self, sample: &SpatialSample) -> Result<Statistics> {
        self.check_domain(sample)?;
        let dft = lean_dft(sample, &self.config.taper, &self.grid)?;
        let folded = folded_periodogram(&dft, &self.classes);
        let c0 = (0..self.radial.len()).map(|r| self.c0_row(&folded, r));
        let d2 = d2_from_c0(c0, &self.radial, self.config.lambda_r, self.config.truncate_c0);
        Ok(Statistics {
            n: sample.len(),
            d1_hat: d1_from_dft(&dft),
            d2,
            tau: tau_biascorrected_from_dft(&dft),
        })
    }

    /// Turns the statistics into a decision; a clamped variance estimate is an error.
    pub fn decide(&self, stats: &Statistics) -> Result<TestResult> {
        if stats.tau.clamped {
            return Err(Error::DegenerateVariance {
                unclamped: stats.tau.unclamped,
            });
        }
        let m_hat = stats.m_hat();
        let statistic = self.config.lambda * m_hat / stats.tau.value.sqrt();
        let (critical, p_value, reject) = decide(statistic, self.config.alpha_level);
        Ok(TestResult {
            n: stats.n,
            d1_hat: stats.d1_hat,
            d2_hat: stats.d2.value,
            m_hat,
            tau_h0_sq_hat: stats.tau.value,
            tau_h0_sq_unclamped: stats.tau.unclamped,
            statistic,
            critical,
            p_value,
            reject,
            radial_terms: stats.d2.terms,
            c0_truncation_index: stats.d2.truncation_index,
        })
    }

    pub fn run(&self, sample: &SpatialSample) -> Result<TestResult> {
        self.decide(&self.statistics(sample)?)
    }
}

/// One-shot test; builds the `J₀` table for `config` and discards it.
pub fn isotropy_test(sample: &SpatialSample, config: &TestConfig) -> Result<TestResult> {
    IsotropyTest::new(*config)?.run(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::naive;
    use crate::rng::Seed;
    use rand::Rng;

    fn toy(n: usize, lambda: f64, seed: u64) -> SpatialSample {
        let mut rng = Seed::new(seed, 17).rng();
        let h = lambda / 2.0;
        let locs = (0..n)
            .map(|_| [rng.random_range(-h..=h), rng.random_range(-h..=h)])
            .collect();
        let vals = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        SpatialSample::new(lambda, locs, vals).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn d1_matches_tilde_sum() {
        let t = Taper::default();
        for seed in 0..5 {
            let s = toy(6, 5.0, seed);
            let g = FrequencyGrid::shifted(2, 5.0).unwrap();
            let eff = d1_efficient(&s, &t, &g).unwrap();
            let lit = naive::d1_naive_tilde(&s, &t, &g).unwrap();
            assert!(rel(eff, lit) < 1e-10, "seed {seed}: {eff} vs {lit}");
            let e = naive::d1_naive(&s, &t, &g).unwrap();
            let c = naive::d1_complement(&s, &t, &g).unwrap();
            assert!(rel(e + c, eff) < 1e-10);
        }
    }

    #[test]
    fn bracket_matches_exhaustive_sum_per_frequency() {
        let s = toy(6, 5.0, 8);
        let t = Taper::default();
        let g = FrequencyGrid::shifted(2, 5.0).unwrap();
        let dft = TaperedDftField::compute(&s, &t, &g, false).unwrap();
        let eff = d1_bracket(&dft);
        let lit = naive::d1_bracket_naive(&s, &t, &g).unwrap();
        let scale = lit.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (a, b) in eff.iter().zip(&lit) {
            assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let s = toy(5, 5.0, 1).scaled(0.0);
        let t = Taper::default();
        let g = FrequencyGrid::shifted(2, 5.0).unwrap();
        assert_eq!(d1_efficient(&s, &t, &g).unwrap(), 0.0);
        assert_eq!(f4_hat(&s, &t, &g).unwrap(), 0.0);
        let cfg = TestConfig {
            a: 2,
            lambda: 5.0,
            a_r: 4,
            lambda_r: 10.0,
            ..TestConfig::default()
        };
        assert_eq!(d2_efficient(&s, &t, &cfg).unwrap().value, 0.0);
        assert_eq!(naive::d1_naive(&s, &t, &g).unwrap(), 0.0);
    }

    #[test]
    fn c0_matches_double_loop() {
        let t = Taper::default();
        let g = FrequencyGrid::shifted(3, 5.0).unwrap();
        let s = toy(2, 5.0, 3);
        let radii = [0.0, 0.4, 1.7];
        let eff = c0_hat(&s, &t, &g, &radii).unwrap();
        let lit = naive::c0_naive(&s, &t, &g, &radii).unwrap();
        for (a, b) in eff.iter().zip(&lit) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "{a} vs {b}");
        }
        // at ρ = 0 the weighting disappears: Σ_k (|S|² − D)/(n²H)
        let dft = TaperedDftField::compute(&s, &t, &g, false).unwrap();
        let plain: f64 = dft
            .values()
            .iter()
            .map(|v| v.norm_sqr() - dft.diag_weight())
            .sum::<f64>()
            / (4.0 * t.h_zero());
        assert!((eff[0] - plain).abs() < 1e-12 * plain.abs().max(1.0));
    }

    #[test]
    fn d2_matches_double_tilde_sum() {
        let t = Taper::default();
        let cfg = TestConfig {
            a: 2,
            lambda: 5.0,
            a_r: 4,
            lambda_r: 10.0,
            truncate_c0: false,
            ..TestConfig::default()
        };
        let s = toy(6, 5.0, 11);
        let eff = d2_efficient(&s, &t, &cfg).unwrap();
        assert_eq!(eff.terms, 4);
        let lit = naive::d2_naive_tilde(&s, &t, &cfg).unwrap();
        assert!(rel(eff.value, lit) < 1e-9, "{} vs {lit}", eff.value);
        let e = naive::d2_naive(&s, &t, &cfg).unwrap();
        let c = naive::d2_complement(&s, &t, &cfg).unwrap();
        assert!(rel(e + c, eff.value) < 1e-9);
    }

    #[test]
    fn truncation_never_adds_terms() {
        let t = Taper::default();
        for seed in 0..6 {
            let s = toy(40, 5.0, seed);
            let mut cfg = TestConfig {
                a: 6,
                lambda: 5.0,
                a_r: 30,
                lambda_r: 20.0,
                truncate_c0: false,
                ..TestConfig::default()
            };
            let all = d2_efficient(&s, &t, &cfg).unwrap();
            cfg.truncate_c0 = true;
            let cut = d2_efficient(&s, &t, &cfg).unwrap();
            assert!(cut.terms <= all.terms);
            assert_eq!(cut.truncation_index.is_some(), cut.terms < all.terms);
        }
    }

    #[test]
    fn f4_from_periodogram() {
        let t = Taper::default();
        let g = FrequencyGrid::shifted(2, 5.0).unwrap();
        let s = toy(3, 5.0, 2);
        let dft = crate::spectral::weighted_dft(&s, &t, &g).unwrap();
        let want: f64 = crate::spectral::tapered_periodogram(&dft)
            .iter()
            .map(|i| ((2.0 * PI).powi(2) * i).powi(4))
            .sum::<f64>()
            * (2.0 * PI / 5.0).powi(2)
            / 24.0;
        assert!(rel(f4_hat(&s, &t, &g).unwrap(), want) < 1e-12);
    }

    #[test]
    fn plain_and_corrected_variance_share_scale() {
        // with the |S|⁸ sum in place of Σ B² the corrected formula is the plain one
        let t = Taper::default();
        let g = FrequencyGrid::shifted(4, 5.0).unwrap();
        let s = toy(30, 5.0, 6);
        let dft = TaperedDftField::compute(&s, &t, &g, false).unwrap();
        let n = 30f64;
        let h0 = t.h_zero();
        let s8: f64 = dft.values().iter().map(|v| v.norm_sqr().powi(4)).sum();
        let via_s8 = (2.0 * PI).powi(4) * 5f64.powi(6) / (12.0 * n.powi(8) * h0.powi(8)) * t.h_power_sum(4, 4) * s8;
        assert!(rel(tau_plain_from_dft(&dft).value, via_s8) < 1e-12);
    }

    #[test]
    fn norm_classes_cover_grid() {
        let g = FrequencyGrid::shifted(80, 30.0).unwrap();
        let c = NormClasses::new(&g);
        assert_eq!(c.len(), 80 * 81 / 2);
        let freqs = g.frequencies();
        for (i, w) in freqs.iter().enumerate().step_by(97) {
            let r = c.radii()[c.class_of[i] as usize];
            assert!((r - w[0].hypot(w[1])).abs() < 1e-12);
        }
    }

    #[test]
    fn refuses_rough_tapers() {
        let cfg = TestConfig {
            taper: Taper::Rectangular,
            ..TestConfig::default()
        };
        assert!(matches!(IsotropyTest::new(cfg), Err(Error::Refused(_))));
        let cfg = TestConfig {
            taper: Taper::CosinePower { alpha: 2 },
            ..TestConfig::default()
        };
        assert!(matches!(IsotropyTest::new(cfg), Err(Error::Refused(_))));
    }

    #[test]
    fn degenerate_variance_is_an_error() {
        let cfg = TestConfig {
            a: 2,
            lambda: 5.0,
            a_r: 4,
            lambda_r: 10.0,
            ..TestConfig::default()
        };
        let s = toy(6, 5.0, 3).scaled(0.0);
        assert!(matches!(isotropy_test(&s, &cfg), Err(Error::DegenerateVariance { .. })));
    }

    #[test]
    fn lambda_mismatch_rejected() {
        let s = toy(6, 5.0, 3);
        assert!(matches!(
            isotropy_test(&s, &TestConfig::default()),
            Err(Error::InvalidArgument(_))
        ));
    }
}
