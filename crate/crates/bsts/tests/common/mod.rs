//! Shared brute-force oracles for the integration suites. Everything here
//! recomputes quantities by definition-level methods (joint Gaussian
//! conditioning, exhaustive path enumeration) so the production recursions
//! can be checked against independent arithmetic.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, RowDVector};
use rand::Rng;
use bsts::ssm::{GaussianState, ObsMap, SystemMatrices};
use bsts::TimeSeries;

/// Exact conditional moments of every state given observed data, computed by
/// assembling the joint Gaussian over all states and observations and
/// conditioning directly. O((nm)³), usable only for tiny models — which is
/// the point: it shares no code path with the filter/smoother recursions.
pub struct JointOracle {
    pub predicted: Vec<(DVector<f64>, DMatrix<f64>)>,
    pub filtered: Vec<(DVector<f64>, DMatrix<f64>)>,
    pub smoothed: Vec<(DVector<f64>, DMatrix<f64>)>,
    pub log_likelihood: f64,
}

pub fn joint_oracle(model: &SystemMatrices, init: &GaussianState, y: &TimeSeries) -> JointOracle {
    let n = y.len();
    let m = model.state_dim();
    let trans = model.transition();
    let process = model.process_covariance();
    let h = model.obs_variance();

    // Joint moments of the stacked state path.
    let mut state_mean: Vec<DVector<f64>> = Vec::with_capacity(n);
    state_mean.push(init.mean.clone());
    for t in 1..n {
        let prev = &state_mean[t - 1];
        state_mean.push(trans * prev);
    }
    // cov[s][t] = Cov(a_s, a_t)
    let mut cov = vec![vec![DMatrix::zeros(m, m); n]; n];
    cov[0][0] = init.covariance.clone();
    for t in 0..n - 1 {
        cov[t + 1][t + 1] = trans * &cov[t][t] * trans.transpose() + &process;
        for s in 0..=t {
            let block = &cov[s][t] * trans.transpose();
            cov[s][t + 1] = block.clone();
            cov[t + 1][s] = block.transpose();
        }
    }

    let observed = y.observed_indices();
    let k = observed.len();
    let mut obs_mean = DVector::zeros(k);
    let mut obs_cov = DMatrix::zeros(k, k);
    let mut values = DVector::zeros(k);
    for (i, &ti) in observed.iter().enumerate() {
        let zi = model.z_row(ti);
        obs_mean[i] = (zi * &state_mean[ti])[(0, 0)];
        values[i] = y.value(ti).unwrap();
        for (j, &tj) in observed.iter().enumerate() {
            obs_cov[(i, j)] = (zi * &cov[ti][tj] * model.z_row(tj).transpose())[(0, 0)];
            if i == j {
                obs_cov[(i, j)] += h;
            }
        }
    }

    let log_likelihood = if k == 0 {
        0.0
    } else {
        let chol = obs_cov.clone().cholesky().expect("oracle obs covariance PD");
        let resid = &values - &obs_mean;
        let solved = chol.solve(&resid);
        let logdet: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        -0.5 * (k as f64 * (2.0 * std::f64::consts::PI).ln()
            + logdet
            + resid.dot(&solved))
    };

    // Conditional of state t on the first `count` observed values.
    let condition = |t: usize, count: usize| -> (DVector<f64>, DMatrix<f64>) {
        if count == 0 {
            return (state_mean[t].clone(), cov[t][t].clone());
        }
        let sub_cov = obs_cov.view((0, 0), (count, count)).into_owned();
        let mut cross = DMatrix::zeros(m, count);
        for (i, &ti) in observed.iter().take(count).enumerate() {
            let col = &cov[t][ti] * model.z_row(ti).transpose();
            cross.set_column(i, &col.column(0));
        }
        let resid = values.rows(0, count) - obs_mean.rows(0, count);
        let chol = sub_cov.cholesky().expect("oracle subset covariance PD");
        let mean = &state_mean[t] + &cross * chol.solve(&resid.into_owned());
        let reduction = &cross * chol.solve(&cross.transpose());
        let covariance = &cov[t][t] - reduction;
        (mean, covariance)
    };

    let mut predicted = Vec::with_capacity(n);
    let mut filtered = Vec::with_capacity(n);
    let mut smoothed = Vec::with_capacity(n);
    for t in 0..n {
        let before = observed.iter().filter(|&&ti| ti < t).count();
        let through = observed.iter().filter(|&&ti| ti <= t).count();
        predicted.push(condition(t, before));
        filtered.push(condition(t, through));
        smoothed.push(condition(t, k));
    }
    JointOracle { predicted, filtered, smoothed, log_likelihood }
}

/// DTW distance by exhaustive enumeration of every admissible warping path
/// (depth-first over the step set, no memoization). Exponential; for
/// oracle-scale inputs only.
pub fn dtw_brute_force(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i] - b[j]).abs();
        if acc >= *best {
            return; // cannot improve: costs are nonnegative
        }
        if i == a.len() - 1 && j == b.len() - 1 {
            *best = acc;
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

/// A randomized small state-space model, its initial state, and a series
/// with missing entries — inputs for oracle comparisons.
pub fn random_model<R: Rng>(rng: &mut R) -> (SystemMatrices, GaussianState, TimeSeries) {
    let m = rng.gen_range(1..=4);
    let r = rng.gen_range(1..=m);
    let n = rng.gen_range(2..=6);

    let transition = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.9..0.9));
    let loading = DMatrix::from_fn(m, r, |_, _| rng.gen_range(-1.0..1.0));
    let state_variances = DVector::from_fn(r, |_, _| rng.gen_range(0.05..1.5));
    let obs_variance = rng.gen_range(0.1..2.0);
    let z = if rng.gen_bool(0.5) {
        ObsMap::Constant(RowDVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0)))
    } else {
        ObsMap::TimeVarying(
            (0..n)
                .map(|_| RowDVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0)))
                .collect(),
        )
    };
    let model = SystemMatrices::new(z, transition, loading, obs_variance, state_variances)
        .expect("random model dimensions are consistent");

    let mean = DVector::from_fn(m, |_, _| rng.gen_range(-3.0..3.0));
    let factor = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
    let covariance = &factor * factor.transpose() + DMatrix::identity(m, m) * 0.1;
    let init = GaussianState::new(mean, covariance).expect("constructed covariance is PSD");

    let mut values: Vec<Option<f64>> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                None
            } else {
                Some(rng.gen_range(-5.0..5.0))
            }
        })
        .collect();
    if values.iter().all(|v| v.is_none()) {
        values[0] = Some(rng.gen_range(-5.0..5.0));
    }
    let start = chrono::NaiveDate::from_ymd_opt(2013, 1, 1).unwrap();
    let y = TimeSeries::new(start, bsts::Frequency::Daily, values).unwrap();
    (model, init, y)
}

/// Largest absolute elementwise difference between two matrices.
pub fn max_matrix_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

/// Largest absolute elementwise difference between two vectors.
pub fn max_vector_gap(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).abs().max()
}
