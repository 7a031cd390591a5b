use statrs::distribution::{ContinuousCDF, Normal};

fn standard() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal parameters are valid")
}

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    standard().cdf(x)
}

/// `1 − Φ(x)`, computed without cancellation in the upper tail.
pub fn normal_sf(x: f64) -> f64 {
    standard().sf(x)
}

/// `Φ⁻¹(p)`.
pub fn normal_quantile(p: f64) -> f64 {
    standard().inverse_cdf(p)
}

/// Critical value, p-value and decision for a one-sided level-`alpha` test that
/// rejects when the statistic strictly exceeds `z_{1−α}`.
pub fn decide(statistic: f64, alpha: f64) -> (f64, f64, bool) {
    let critical = normal_quantile(1.0 - alpha);
    (critical, normal_sf(statistic), statistic > critical)
}
