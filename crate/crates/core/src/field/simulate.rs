use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::llt::factor::{cholesky_in_place, cholesky_in_place_scratch, LltRegularization};
use faer::{Mat, Par};
use rand_distr::{Distribution, StandardNormal};

use super::{CovarianceModel, SpatialSample};
use crate::error::{Error, Result};
use crate::rng::Seed;

/// Diagonal jitter levels tried in order, as multiples of `c(0)`.
pub const JITTER_LADDER: [f64; 3] = [1e-10, 1e-8, 1e-6];

/// A simulated sample together with the jitter that made the factorization succeed.
#[derive(Debug, Clone)]
pub struct FieldDraw {
    pub sample: SpatialSample,
    pub jitter: f64,
}

/// Dense symmetric covariance matrix `Σ_ij = c(s_i − s_j)` (no jitter).
pub fn covariance_matrix(model: &CovarianceModel, locations: &[[f64; 2]]) -> Mat<f64> {
    let n = locations.len();
    let mut a = lower_covariance(model, locations);
    for j in 0..n {
        for i in j + 1..n {
            a[(j, i)] = a[(i, j)];
        }
    }
    a
}

fn lower_covariance(model: &CovarianceModel, locations: &[[f64; 2]]) -> Mat<f64> {
    let n = locations.len();
    let mut a = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        let sj = locations[j];
        let col = a
            .col_mut(j)
            .try_as_col_major_mut()
            .expect("fresh matrix is column-major")
            .as_slice_mut();
        for i in j..n {
            let si = locations[i];
            col[i] = model.covariance_unchecked([si[0] - sj[0], si[1] - sj[1]]);
        }
    }
    a
}

/// Draws `Z ~ N(0, Σ)` at the given locations through a Cholesky factor of
/// `Σ + εI`, escalating `ε` along [`JITTER_LADDER`] when the factorization fails.
///
/// The factorization runs single-threaded so the draw is bit-identical
/// whatever thread pool the caller is in.
pub fn simulate_field(model: &CovarianceModel, lambda: f64, locations: Vec<[f64; 2]>, seed: Seed) -> Result<FieldDraw> {
    model.validate()?;
    let n = locations.len();
    if n == 0 {
        return Err(Error::invalid("need at least one location"));
    }
    let c0 = model.variance();
    let mut last_pivot = None;
    let mut mem = MemBuffer::new(cholesky_in_place_scratch::<f64>(n, Par::Seq, Default::default()));

    for &rel in JITTER_LADDER.iter() {
        let eps = rel * c0;
        let mut a = lower_covariance(model, &locations);
        for i in 0..n {
            a[(i, i)] += eps;
        }
        let factored = cholesky_in_place(
            a.as_mut(),
            LltRegularization::default(),
            Par::Seq,
            MemStack::new(&mut mem),
            Default::default(),
        );
        match factored {
            Ok(_) => {
                let values = lower_times_normals(&a, seed);
                let sample = SpatialSample::new(lambda, locations, values)?;
                return Ok(FieldDraw { sample, jitter: eps });
            }
            Err(faer::linalg::cholesky::llt::factor::LltError::NonPositivePivot { index }) => {
                last_pivot = Some(index);
            }
        }
    }
    Err(Error::NumericalFailure {
        message: format!("covariance matrix of {n} points is not positive definite"),
        last_jitter: JITTER_LADDER[JITTER_LADDER.len() - 1] * c0,
        pivot: last_pivot,
    })
}

/// `y = L ξ` with `L` the lower factor stored in `factor`, `ξ` i.i.d. standard normal.
fn lower_times_normals(factor: &Mat<f64>, seed: Seed) -> Vec<f64> {
    let n = factor.nrows();
    let mut rng = seed.rng();
    let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut y = vec![0.0; n];
    for (j, &x) in xi.iter().enumerate() {
        let col = factor
            .col(j)
            .try_as_col_major()
            .expect("column-major factor")
            .as_slice();
        for i in j..n {
            y[i] += col[i] * x;
        }
    }
    y
}
