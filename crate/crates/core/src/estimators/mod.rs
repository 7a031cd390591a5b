//! The isotropy test statistics and the level-α decision.

mod config;
pub mod efficient;
pub mod naive;
pub mod normal;

pub use config::{TestConfig, TestResult};
pub use efficient::{
    c0_hat, d1_efficient, d2_efficient, f4_hat, isotropy_test, tau_h0_biascorrected, tau_h0_plain, D2Estimate,
    IsotropyTest, Statistics, TauEstimate,
};
pub use naive::{c0_naive, d1_naive, d2_naive};
