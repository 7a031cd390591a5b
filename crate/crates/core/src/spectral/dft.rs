//! Tapered DFT of irregularly spaced observations.
//!
//! `S(ω) = Σ_j h(s_j/λ) Z(s_j) exp(i s_j·ω)` factorises per point as
//! `exp(i s_{j1} ω₁) · exp(i s_{j2} ω₂)`, so two `n × 2a` phase tables replace
//! `(2a)² n` complex exponentials by `(2a)² n` multiply-adds. Each table row is
//! built by repeated rotation and re-anchored to a direct evaluation every
//! [`REANCHOR`] steps, which keeps the drift near machine precision.

use num_complex::Complex64;
use rayon::prelude::*;

use super::FrequencyGrid;
use crate::error::{Error, Result};
use crate::field::SpatialSample;
use crate::oracles::quadrature::pairwise_sum;
use crate::taper::Taper;

pub const REANCHOR: usize = 64;

/// Points accumulated sequentially before partial sums are combined pairwise.
const POINT_BLOCK: usize = 256;
/// Frequency rows handled together so the second phase table is streamed fewer times.
const ROW_BLOCK: usize = 8;

#[derive(Debug, Clone)]
struct PhaseTables {
    /// `exp(i s_{j,1} ω_{k₁})`, row `j`, column `k₁ + a`.
    first: Vec<Complex64>,
    second: Vec<Complex64>,
}

/// The tapered DFT on a frequency grid together with the point weights the
/// estimators need.
#[derive(Debug, Clone)]
pub struct TaperedDftField {
    grid: FrequencyGrid,
    taper: Taper,
    n: usize,
    /// `S(ω_k)`, row-major over the grid.
    s: Vec<Complex64>,
    /// `Σ_j d_j w_j e^{i s_j·ω_k}` with `w_j = h(s_j/λ) Z_j` and `d_j = w_j²`.
    t: Vec<Complex64>,
    weights: Vec<f64>,
    diag_weight: f64,
    diag_weight_sq: f64,
    phases: Option<PhaseTables>,
}

/// `exp(i x ω_k)` for all grid coordinates, by rotation with periodic re-anchoring.
fn phase_row(x: f64, coords: &[f64], spacing: f64, out: &mut [Complex64]) {
    let step = Complex64::cis(x * spacing);
    let mut cur = Complex64::cis(x * coords[0]);
    for (i, slot) in out.iter_mut().enumerate() {
        if i % REANCHOR == 0 {
            cur = Complex64::cis(x * coords[i]);
        }
        *slot = cur;
        cur *= step;
    }
}

fn build_phases(sample: &SpatialSample, grid: &FrequencyGrid) -> PhaseTables {
    let m = grid.side();
    let coords = grid.coordinates();
    let spacing = grid.spacing();
    let n = sample.len();
    let mut first = vec![Complex64::new(0.0, 0.0); n * m];
    let mut second = vec![Complex64::new(0.0, 0.0); n * m];
    first
        .par_chunks_mut(m)
        .zip(second.par_chunks_mut(m))
        .zip(sample.locations().par_iter())
        .for_each(|((f, s), loc)| {
            phase_row(loc[0], &coords, spacing, f);
            phase_row(loc[1], &coords, spacing, s);
        });
    PhaseTables { first, second }
}

fn pairwise_reduce(mut parts: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

/// `S` and `T` on the rows `rows` (grid positions of `k₁`), each `rows.len() × 2a`.
fn accumulate_rows(
    rows: &[usize],
    m: usize,
    tables: &PhaseTables,
    w: &[f64],
    wd: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    let r = rows.len();
    let mut parts_s = Vec::new();
    let mut parts_t = Vec::new();
    for start in (0..w.len()).step_by(POINT_BLOCK) {
        let end = (start + POINT_BLOCK).min(w.len());
        let mut acc_s = vec![zero; r * m];
        let mut acc_t = vec![zero; r * m];
        for j in start..end {
            let p2 = &tables.second[j * m..(j + 1) * m];
            for (ri, &row) in rows.iter().enumerate() {
                let e = tables.first[j * m + row];
                let vs = e * w[j];
                let vt = e * wd[j];
                let out_s = &mut acc_s[ri * m..(ri + 1) * m];
                for (o, p) in out_s.iter_mut().zip(p2) {
                    *o += vs * p;
                }
                let out_t = &mut acc_t[ri * m..(ri + 1) * m];
                for (o, p) in out_t.iter_mut().zip(p2) {
                    *o += vt * p;
                }
            }
        }
        parts_s.push(acc_s);
        parts_t.push(acc_t);
    }
    (pairwise_reduce(parts_s), pairwise_reduce(parts_t))
}

impl TaperedDftField {
    /// Computes `S` (and the cubic companion `T`) on `grid`; per-point phase tables are
    /// kept only when `keep_phases` is set.
    pub fn compute(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid, keep_phases: bool) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::invalid("empty sample"));
        }
        let lambda = sample.lambda();
        let weights: Vec<f64> = sample
            .locations()
            .iter()
            .zip(sample.values())
            .map(|(s, z)| taper.eval([s[0] / lambda, s[1] / lambda]) * z)
            .collect();
        let d: Vec<f64> = weights.iter().map(|w| w * w).collect();
        let wd: Vec<f64> = weights.iter().zip(&d).map(|(w, d)| w * d).collect();
        let diag_weight = pairwise_sum(&d);
        let diag_weight_sq = pairwise_sum(&d.iter().map(|x| x * x).collect::<Vec<_>>());

        let tables = build_phases(sample, grid);
        let m = grid.side();
        let a = grid.a;
        // on the shifted grid S(-k-1) = conj S(k), so rows k₁ ≥ 0 suffice
        let rows: Vec<usize> = if grid.shifted {
            (a..m).collect()
        } else {
            (0..m).collect()
        };
        let blocks: Vec<(Vec<Complex64>, Vec<Complex64>)> = rows
            .par_chunks(ROW_BLOCK)
            .map(|chunk| accumulate_rows(chunk, m, &tables, &weights, &wd))
            .collect();

        let zero = Complex64::new(0.0, 0.0);
        let mut s = vec![zero; m * m];
        let mut t = vec![zero; m * m];
        for (chunk, (bs, bt)) in rows.chunks(ROW_BLOCK).zip(blocks) {
            for (ri, &row) in chunk.iter().enumerate() {
                s[row * m..(row + 1) * m].copy_from_slice(&bs[ri * m..(ri + 1) * m]);
                t[row * m..(row + 1) * m].copy_from_slice(&bt[ri * m..(ri + 1) * m]);
            }
        }
        if grid.shifted {
            for i1 in 0..a {
                for i2 in 0..m {
                    let mirror = (m - 1 - i1) * m + (m - 1 - i2);
                    s[i1 * m + i2] = s[mirror].conj();
                    t[i1 * m + i2] = t[mirror].conj();
                }
            }
        }
        Ok(TaperedDftField {
            grid: *grid,
            taper: *taper,
            n: sample.len(),
            s,
            t,
            weights,
            diag_weight,
            diag_weight_sq,
            phases: keep_phases.then_some(tables),
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn taper(&self) -> &Taper {
        &self.taper
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S(ω_k)` row-major over the grid.
    pub fn values(&self) -> &[Complex64] {
        &self.s
    }

    /// `Σ_j h³(s_j/λ) Z³_j e^{i s_j·ω_k}`, used to expand leave-one-out sums.
    pub fn cubic_values(&self) -> &[Complex64] {
        &self.t
    }

    /// `h(s_j/λ) Z_j` per point.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_j h²(s_j/λ) Z²_j`.
    pub fn diag_weight(&self) -> f64 {
        self.diag_weight
    }

    /// `Σ_j h⁴(s_j/λ) Z⁴_j`.
    pub fn diag_weight_sq(&self) -> f64 {
        self.diag_weight_sq
    }

    pub fn has_phases(&self) -> bool {
        self.phases.is_some()
    }

    /// `λ^{d/2} / ((2π)^{d/2} n H(0)^{1/2})` with `d = 2`: the factor turning `S` into `J`.
    pub fn normalizer(&self) -> f64 {
        self.grid.lambda / (2.0 * std::f64::consts::PI * self.n as f64 * self.taper.h_zero().sqrt())
    }

    /// Normalised DFT `J(ω_k)`.
    pub fn normalized(&self) -> Vec<Complex64> {
        let c = self.normalizer();
        self.s.iter().map(|v| v * c).collect()
    }

    /// `S(ω_k) − w_j e^{i s_j·ω_k}` for every grid frequency.
    pub fn leave_one_out(&self, j: usize) -> Result<Vec<Complex64>> {
        if j >= self.n {
            return Err(Error::invalid(format!(
                "point index {j} out of range for n = {}",
                self.n
            )));
        }
        let tables = self
            .phases
            .as_ref()
            .ok_or_else(|| Error::invalid("phase tables were not kept for this transform"))?;
        let m = self.grid.side();
        let w = self.weights[j];
        let p1 = &tables.first[j * m..(j + 1) * m];
        let p2 = &tables.second[j * m..(j + 1) * m];
        let mut out = self.s.clone();
        for (i1, e1) in p1.iter().enumerate() {
            let v = e1 * w;
            for (o, e2) in out[i1 * m..(i1 + 1) * m].iter_mut().zip(p2) {
                *o -= v * e2;
            }
        }
        Ok(out)
    }
}

/// Tapered DFT with per-point phase tables kept (needed for [`leave_one_out_dft`]).
pub fn weighted_dft(sample: &SpatialSample, taper: &Taper, grid: &FrequencyGrid) -> Result<TaperedDftField> {
    TaperedDftField::compute(sample, taper, grid, true)
}

pub fn leave_one_out_dft(dft: &TaperedDftField, j: usize) -> Result<Vec<Complex64>> {
    dft.leave_one_out(j)
}

/// `I(ω_k) = |J(ω_k)|²`.
pub fn tapered_periodogram(dft: &TaperedDftField) -> Vec<f64> {
    let c = dft.normalizer().powi(2);
    dft.s.iter().map(|v| c * v.norm_sqr()).collect()
}

/// `(2π)² I(ω_k) = λ² |S(ω_k)|² / (n² H(0))`, the scale on which the periodogram
/// estimates `f(ω) = ∫ c(h) e^{-iω·h} dh`.
pub fn density_periodogram(dft: &TaperedDftField) -> Vec<f64> {
    let c = (2.0 * std::f64::consts::PI * dft.normalizer()).powi(2);
    dft.s.iter().map(|v| c * v.norm_sqr()).collect()
}
