//! Quadrature rules: Gauss–Legendre panels, adaptive Gauss–Kronrod (7/15) and a
//! polar product rule for integrals over discs in the frequency plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation radius, panel count and self-convergence tolerance for the
/// population integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Frequency-space truncation radius; `None` uses the model's own cutoff.
    pub cutoff: Option<f64>,
    /// Radial Gauss–Legendre panels (16 nodes each).
    pub panels: usize,
    /// Angular trapezoid points.
    pub angles: usize,
    /// Relative change tolerated when the panel count doubles.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            cutoff: None,
            panels: 64,
            angles: 256,
            tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn refined(&self) -> QuadratureSpec {
        QuadratureSpec {
            panels: 2 * self.panels,
            angles: 2 * self.angles,
            ..*self
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` nodes on `[a, b]`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        PanelRule { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        pairwise_sum(
            &self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x))
                .collect::<Vec<_>>(),
        )
    }
}

/// Polar product rule on the disc of radius `cutoff`: Gauss–Legendre panels in
/// the radius times the periodic trapezoid rule in the angle.
#[derive(Debug, Clone)]
pub struct PolarRule {
    pub radial: PanelRule,
    pub angles: Vec<(f64, f64)>,
    pub angle_weight: f64,
}

impl PolarRule {
    pub fn new(cutoff: f64, panels: usize, angles: usize) -> Self {
        PolarRule::annulus(0.0, cutoff, panels, angles)
    }

    /// Same rule restricted to the annulus `inner ≤ ‖ω‖ ≤ outer`.
    pub fn annulus(inner: f64, outer: f64, panels: usize, angles: usize) -> Self {
        let radial = PanelRule::new(inner, outer, panels, 16);
        let angle_weight = 2.0 * PI / angles as f64;
        let angles = (0..angles)
            .map(|j| {
                let th = angle_weight * j as f64;
                (th.cos(), th.sin())
            })
            .collect();
        PolarRule {
            radial,
            angles,
            angle_weight,
        }
    }

    /// `∫₀^{2π} g(t cos θ, t sin θ) dθ` at every radial node.
    pub fn angular_integrals(&self, g: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
        self.radial
            .nodes
            .iter()
            .map(|&t| {
                let s: f64 = self.angles.iter().map(|&(c, s)| g([t * c, t * s])).sum();
                s * self.angle_weight
            })
            .collect()
    }

    /// `∫_{‖ω‖ ≤ cutoff} g(ω) dω`.
    pub fn integrate(&self, g: impl Fn([f64; 2]) -> f64) -> f64 {
        let ang = self.angular_integrals(g);
        let terms: Vec<f64> = ang
            .iter()
            .zip(self.radial.nodes.iter().zip(&self.radial.weights))
            .map(|(a, (&t, &w))| a * t * w)
            .collect();
        pairwise_sum(&terms)
    }
}

/// Tree summation; error grows like `log n` instead of `n`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod integral of `f` on `[a, b]`: the interval
/// with the largest error estimate is bisected until the summed estimate is
/// below the absolute tolerance `tol`.
pub fn integrate_adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        let total: f64 = pairwise_sum(&parts.iter().map(|p| p.2).collect::<Vec<_>>());
        if total_err <= tol.max(1e-15 * total.abs()) {
            return Ok(total);
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3))
            .expect("at least one interval");
        let (lo, hi, _, err) = parts[worst];
        let mid = 0.5 * (lo + hi);
        if parts.len() >= MAX_INTERVALS || mid <= lo || mid >= hi {
            return Err(Error::QuadratureFailure(format!(
                "no convergence on [{a}, {b}] (error estimate {total_err:e}, tolerance {tol:e}, worst interval [{lo}, {hi}] with {err:e})"
            )));
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts[worst] = (lo, mid, v1, e1);
        parts.insert(worst + 1, (mid, hi, v2, e2));
    }
}

/// `∫_a^∞ f(u) du` through the map `u = a + t/(1 − t)`.
pub fn integrate_to_infinity(mut f: impl FnMut(f64) -> f64, a: f64, tol: f64) -> Result<f64> {
    integrate_adaptive(
        |t| {
            let one_minus = 1.0 - t;
            let u = a + t / one_minus;
            f(u) / (one_minus * one_minus)
        },
        0.0,
        1.0,
        tol,
    )
}
