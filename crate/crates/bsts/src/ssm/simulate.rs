//! Simulation smoothing (forward-filter backward-sample) and data
//! generation from a state-space model.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::ssm::filter::kalman_filter;
use crate::ssm::{psd_sqrt, symmetrize, GaussianState, SystemMatrices};

/// Draws an m-vector from `N(mean, cov)` where `cov` may be singular.
fn draw_gaussian<R: Rng + ?Sized>(
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    rng: &mut R,
) -> DVector<f64> {
    let root = psd_sqrt(cov);
    let z = DVector::from_fn(mean.len(), |_, _| rng.sample(StandardNormal));
    mean + root * z
}

/// Solves `P_pred X = B`, tolerating singular predicted covariances.
fn solve_predicted(p_pred: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(chol) = p_pred.clone().cholesky() {
        return Ok(chol.solve(b));
    }
    let pinv = p_pred
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|e| Error::numerical(format!("pseudo-inverse of predicted covariance: {e}")))?;
    Ok(&pinv * b)
}

/// Draws one state path `a_1..a_n` from `p(a | y)` by forward filtering and
/// backward sampling. Returns an `n x m` matrix with one state per row.
///
/// `init` is the prior of the state at the first observation time. Missing
/// observations are handled by the filter (no measurement update). The draw
/// is a deterministic function of `rng`'s state: the same seeded generator
/// produces bitwise-identical paths.
pub fn simulate_states<R: Rng + ?Sized>(
    model: &SystemMatrices,
    init: &GaussianState,
    y: &TimeSeries,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let filter = kalman_filter(model, init, y)?;
    let n = filter.len();
    let m = model.state_dim();
    let trans = model.transition();

    let mut draws = DMatrix::zeros(n, m);
    let mut next = draw_gaussian(
        &filter.filtered[n - 1].mean,
        &filter.filtered[n - 1].covariance,
        rng,
    );
    draws.row_mut(n - 1).copy_from(&next.transpose());

    for t in (0..n - 1).rev() {
        let p_f = &filter.filtered[t].covariance;
        let p_pred_next = &filter.predicted[t + 1].covariance;
        let j_t = solve_predicted(p_pred_next, &(trans * p_f))?.transpose();

        let mean = &filter.filtered[t].mean + &j_t * (&next - &filter.predicted[t + 1].mean);
        let cov = symmetrize(&(p_f - &j_t * p_pred_next * j_t.transpose()));
        next = draw_gaussian(&mean, &cov, rng);
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::numerical(format!(
                "non-finite state draw at time {t}"
            )));
        }
        draws.row_mut(t).copy_from(&next.transpose());
    }
    Ok(draws)
}

/// A simulated realization of a state-space model: the observations and the
/// underlying state path (`n x m`, one state per row).
#[derive(Debug, Clone)]
pub struct SimulatedData {
    pub observations: TimeSeries,
    pub states: DMatrix<f64>,
}

/// Simulates `n` observations from the model, drawing the first state from
/// `init` and then iterating the transition and observation equations.
pub fn simulate_data<R: Rng + ?Sized>(
    model: &SystemMatrices,
    init: &GaussianState,
    n: usize,
    rng: &mut R,
) -> Result<SimulatedData> {
    if n == 0 {
        return Err(Error::invalid("cannot simulate an empty series"));
    }
    if init.dim() != model.state_dim() {
        return Err(Error::invalid(format!(
            "initial state has dimension {}, model state dimension is {}",
            init.dim(),
            model.state_dim()
        )));
    }
    if let Some(len) = model.time_varying_len() {
        if len != n {
            return Err(Error::invalid(format!(
                "time-varying observation map covers {len} points, requested {n}"
            )));
        }
    }
    let m = model.state_dim();
    let r = model.innovation_dim();
    let obs_sd = model.obs_variance().sqrt();
    let innovation_sds: Vec<f64> =
        model.state_variances().iter().map(|q| q.sqrt()).collect();

    let mut states = DMatrix::zeros(n, m);
    let mut values = Vec::with_capacity(n);
    let mut alpha = draw_gaussian(&init.mean, &init.covariance, rng);

    for t in 0..n {
        states.row_mut(t).copy_from(&alpha.transpose());
        let noise: f64 = rng.sample(StandardNormal);
        values.push((model.z_row(t) * &alpha)[(0, 0)] + obs_sd * noise);
        if t + 1 < n {
            let eta = DVector::from_fn(r, |j, _| {
                let z: f64 = rng.sample(StandardNormal);
                innovation_sds[j] * z
            });
            alpha = model.transition() * alpha + model.loading() * eta;
        }
    }
    let observations = TimeSeries::from_values(values)?;
    Ok(SimulatedData { observations, states })
}
