#![allow(dead_code)]

use aniso_spec::{CovarianceModel, Seed, SpatialSample};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

/// Fixed-point bits used by [`j0_series_exact`].
const FRAC_BITS: u64 = 400;

/// `J₀(x) = Σ (−x²/4)^k / (k!)²` evaluated in 400-bit fixed point.
///
/// `x` is taken as the exact binary value of the double, so the only error is
/// the truncation of each term to 2⁻⁴⁰⁰, amplified by at most the largest term
/// (about e^x / x); at x = 50 that leaves more than 300 correct bits.
pub fn j0_series_exact(x: f64) -> f64 {
    assert!(x.is_finite() && x.abs() <= 60.0);
    if x == 0.0 {
        return 1.0;
    }
    // x = m · 2^e with integer m
    let (mantissa, exponent) = decompose(x.abs());
    let m2 = BigInt::from(mantissa) * BigInt::from(mantissa);
    // x²/4 = m² · 2^(2e − 2)
    let shift = 2 * exponent - 2;
    let one = BigInt::from(1) << FRAC_BITS;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term *= &m2;
        term = if shift >= 0 {
            term << shift as u64
        } else {
            term >> (-shift) as u64
        };
        term /= BigInt::from(k * k);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if k > 40 && term.abs() < BigInt::from(1) << 8 {
            break;
        }
    }
    // keep 100 fractional bits, then divide in floating point
    let head = (sum >> (FRAC_BITS - 100)).to_f64().expect("finite");
    head / 2f64.powi(100)
}

fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// Uniform locations with uniform values; enough for algebraic identities.
pub fn toy_sample(n: usize, lambda: f64, seed: u64) -> SpatialSample {
    let mut rng = Seed::new(seed, 99).rng();
    let h = lambda / 2.0;
    let locs = (0..n)
        .map(|_| [rng.random_range(-h..=h), rng.random_range(-h..=h)])
        .collect();
    let vals = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    SpatialSample::new(lambda, locs, vals).unwrap()
}

pub fn null_model() -> CovarianceModel {
    CovarianceModel::GaussianAniso { r: 1.0 }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}
