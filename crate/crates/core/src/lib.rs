//! Frequency-domain isotropy testing for stationary random fields observed at
//! uniformly scattered locations in a square `[-λ/2, λ/2]²`.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: covariance models, location sampling and dense Gaussian field simulation.
//! - [`taper`]: product cosine-power windows, their `H` coefficients and frequency windows.
//! - [`spectral`]: shifted Fourier grids, the tapered DFT over irregular points and the
//!   tapered periodogram.
//! - [`estimators`]: the integrated-periodogram statistics `D̂₁`, `D̂₂`, `M̂`, the
//!   bias-corrected variance estimate and the level-α test, plus exhaustive-sum oracles.
//! - [`oracles`]: `J₀`, quadrature rules and the population quantities the estimators
//!   converge to, together with the L-function inequality checks.
//! - [`harness`]: configuration parsing and the seeded Monte Carlo engine behind the CLI.

pub mod error;
pub mod estimators;
pub mod field;
pub mod harness;
pub mod oracles;
pub mod rng;
pub mod spectral;
pub mod taper;

pub use error::{Error, Result};
pub use estimators::{isotropy_test, IsotropyTest, TestConfig, TestResult};
pub use field::{CovarianceModel, SpatialSample};
pub use rng::Seed;
pub use spectral::{FrequencyGrid, TaperedDftField};
pub use taper::Taper;
