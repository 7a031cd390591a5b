//! Reference quantities: `J₀`, quadrature rules, population limits of the
//! estimators and numerical checks of the L-function inequalities.

pub mod bessel;
pub mod envelope;
pub mod lfunc;
pub mod population;
pub mod quadrature;

pub use bessel::{bessel_j0, j0_angular_identity_check};
pub use envelope::{beta_envelope_check, beta_envelope_report, EnvelopeGrid, EnvelopeReport};
pub use lfunc::{ell_function, l_convolution, l_function, l_sum, verify_l_convolution, verify_l_sum, LFunctionParams};
pub use population::{
    h_weight_sums, lag_cutoff, population_d1, population_d2, population_m2, population_tau_limits, D2Estimate,
    M2Estimate, QuadEstimate, TauLimits,
};
pub use quadrature::QuadratureSpec;
