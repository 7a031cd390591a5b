//! Bessel function of the first kind, order zero.
//!
//! Three regimes, each accurate to about 1e-14 absolute:
//!
//! - `|x| ≤ 8`: the power series `Σ (-x²/4)^k / (k!)²`. The largest term is
//!   about 114 at `x = 8`, so cancellation costs at most two digits.
//! - `8 < |x| ≤ 25`: Miller's backward recurrence normalised by
//!   `J₀ + 2 Σ J_{2k} = 1`.
//! - `|x| > 25`: Hankel's asymptotic expansion, truncated at its smallest term
//!   (below `e^{-2|x|}`, so far under 1e-20 here).
//!
//! The asymptotic series alone is not accurate enough just above 8 (its
//! smallest term there is near 1e-7), which is why the middle band exists.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J₀(x)`. The function is even, so negative arguments are evaluated at `|x|`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        series(x)
    } else if x <= ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-3) {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> f64 {
    let start = 2 * ((x as usize + 40) / 2);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{k-1}
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
        }
        if k == 1 {
            j0 = cur;
        }
    }
    j0 / (norm + j0)
}

fn asymptotic(x: f64) -> f64 {
    // a_k = Π_{i≤k} (-(2i-1)²) / (k! 8^k), P = Σ (-1)^k a_{2k}/x^{2k}, Q = Σ (-1)^k a_{2k+1}/x^{2k+1}
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if last < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = (FRAC_1_SQRT_2 * (c + s), FRAC_1_SQRT_2 * (s - c));
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Residual of `J₀(r‖x‖) = (2π)⁻¹ ∫₀^{2π} exp(i r (cos θ, sin θ)·x) dθ` with the
/// integral evaluated by the `panels`-point periodic trapezoid rule.
///
/// The imaginary part of the integrand integrates to zero by the symmetry
/// `θ → θ + π`, so only the cosine is summed.
pub fn j0_angular_identity_check(r: f64, x: [f64; 2], panels: usize) -> f64 {
    let panels = panels.max(1);
    let step = 2.0 * PI / panels as f64;
    let sum: f64 = (0..panels)
        .map(|j| {
            let (s, c) = (step * j as f64).sin_cos();
            (r * (c * x[0] + s * x[1])).cos()
        })
        .sum();
    let quad = sum / panels as f64;
    (quad - bessel_j0(r * x[0].hypot(x[1]))).abs()
}
