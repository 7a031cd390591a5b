mod common;

use aniso_spec::estimators::{c0_hat, d1_efficient, d2_efficient, f4_hat, naive};
use aniso_spec::spectral::TaperedDftField;
use aniso_spec::{Error, FrequencyGrid, IsotropyTest, SpatialSample, Taper, TestConfig};
use proptest::prelude::*;

use common::toy_sample;

fn small_config() -> TestConfig {
    TestConfig {
        a: 6,
        lambda: 5.0,
        a_r: 20,
        lambda_r: 20.0,
        ..TestConfig::default()
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scale_equivariance(seed in 0u64..10_000, n in 10usize..60, c in 0.1f64..10.0) {
        let s = toy_sample(n, 5.0, seed);
        let sc = s.scaled(c);
        let t = Taper::default();
        let cfg = small_config();
        let g = FrequencyGrid::shifted(cfg.a, cfg.lambda).unwrap();
        let c4 = c.powi(4);
        prop_assert!(close(d1_efficient(&sc, &t, &g).unwrap(), c4 * d1_efficient(&s, &t, &g).unwrap(), 1e-9));
        prop_assert!(close(
            d2_efficient(&sc, &t, &cfg).unwrap().value,
            c4 * d2_efficient(&s, &t, &cfg).unwrap().value,
            1e-9
        ));
        prop_assert!(close(f4_hat(&sc, &t, &g).unwrap(), c4 * c4 * f4_hat(&s, &t, &g).unwrap(), 1e-9));
        let test = IsotropyTest::new(cfg).unwrap();
        if let (Ok(a), Ok(b)) = (test.run(&s), test.run(&sc)) {
            prop_assert!((a.statistic - b.statistic).abs() <= 1e-9 * a.statistic.abs().max(1.0));
            prop_assert_eq!(a.reject, b.reject);
        }
    }

    #[test]
    fn permutation_invariance(seed in 0u64..10_000, n in 10usize..60, shift in 1usize..59) {
        let s = toy_sample(n, 5.0, seed);
        let order: Vec<usize> = (0..n).map(|j| (j + shift) % n).rev().collect();
        let p = s.permuted(&order);
        let test = IsotropyTest::new(small_config()).unwrap();
        let (a, b) = (test.statistics(&s).unwrap(), test.statistics(&p).unwrap());
        // only summation order changes; the c0 differences cancel, so allow a few
        // thousand ulps rather than bit equality
        prop_assert!(close(a.d1_hat, b.d1_hat, 1e-10), "{} vs {}", a.d1_hat, b.d1_hat);
        prop_assert!(close(a.d2.value, b.d2.value, 1e-10), "{} vs {}", a.d2.value, b.d2.value);
        prop_assert!(close(a.tau.unclamped, b.tau.unclamped, 1e-10));
        prop_assert_eq!(a.d2.terms, b.d2.terms);
    }

    #[test]
    fn dft_is_linear(seed in 0u64..10_000, n in 1usize..40, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let s1 = toy_sample(n, 5.0, seed);
        let s2 = toy_sample(n, 5.0, seed + 1);
        let mixed: Vec<f64> = s1.values().iter().zip(s2.values()).map(|(x, y)| alpha * x + beta * y).collect();
        let s2 = SpatialSample::new(5.0, s1.locations().to_vec(), s2.values().to_vec()).unwrap();
        let sm = SpatialSample::new(5.0, s1.locations().to_vec(), mixed).unwrap();
        let t = Taper::default();
        let g = FrequencyGrid::shifted(4, 5.0).unwrap();
        let d1 = TaperedDftField::compute(&s1, &t, &g, false).unwrap();
        let d2 = TaperedDftField::compute(&s2, &t, &g, false).unwrap();
        let dm = TaperedDftField::compute(&sm, &t, &g, false).unwrap();
        let scale: f64 = s1.values().iter().chain(s2.values()).map(|v| v.abs()).sum::<f64>() * 6.0 + 1e-300;
        for ((a, b), m) in d1.values().iter().zip(d2.values()).zip(dm.values()) {
            prop_assert!((alpha * a + beta * b - m).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn literal_sums_are_real(seed in 0u64..10_000, n in 4usize..9, a in 1usize..4) {
        // the literal sums refuse to return if the imaginary part does not cancel
        let s = toy_sample(n, 5.0, seed);
        let t = Taper::default();
        let g = FrequencyGrid::shifted(a, 5.0).unwrap();
        prop_assert!(naive::d1_naive(&s, &t, &g).is_ok());
        prop_assert!(naive::c0_naive(&s, &t, &g, &[0.0, 0.7, 3.0]).is_ok());
        let c0 = c0_hat(&s, &t, &g, &[0.0, 0.7, 3.0]).unwrap();
        prop_assert!(c0.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn truncation_is_monotone(seed in 0u64..10_000, n in 10usize..80) {
        let s = toy_sample(n, 5.0, seed);
        let t = Taper::default();
        let mut cfg = TestConfig { truncate_c0: false, ..small_config() };
        let all = d2_efficient(&s, &t, &cfg).unwrap();
        cfg.truncate_c0 = true;
        let cut = d2_efficient(&s, &t, &cfg).unwrap();
        prop_assert!(cut.terms <= all.terms);
        prop_assert!(cut.value <= all.value * (1.0 + 1e-12));
    }
}

#[test]
fn empty_sample_rejected() {
    assert!(SpatialSample::new(5.0, vec![], vec![])
        .map(|s| s.is_empty())
        .unwrap_or(true));
    let s = toy_sample(2, 5.0, 0);
    let test = IsotropyTest::new(small_config()).unwrap();
    assert!(matches!(test.run(&s), Err(Error::InvalidArgument(_))));
}

#[test]
fn rectangular_taper_refused_with_reason() {
    let cfg = TestConfig {
        taper: Taper::Rectangular,
        ..small_config()
    };
    match IsotropyTest::new(cfg) {
        Err(Error::Refused(msg)) => assert!(msg.contains("edge-effect")),
        other => panic!("expected refusal, got {other:?}"),
    }
}
