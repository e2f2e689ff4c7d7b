//! Kalman filter and fixed-interval smoother.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::ssm::{symmetrize, GaussianState, SystemMatrices};

const LN_2PI: f64 = 1.837877066409345483560659472811;

/// Output of [`kalman_filter`]: one-step-ahead (predicted) and filtered
/// state distributions for every time point, the one-step-ahead predictive
/// moments of the observation, and the Gaussian log-likelihood accumulated
/// over the observed points.
#[derive(Debug, Clone)]
pub struct FilterResult {
    /// `p(a_t | y_{1..t-1})` for each `t` (the first entry is the prior).
    pub predicted: Vec<GaussianState>,
    /// `p(a_t | y_{1..t})`; equals the predicted state where `y_t` is missing.
    pub filtered: Vec<GaussianState>,
    /// Predictive mean `Z_t a_{t|t-1}` of the observation, for every `t`.
    pub osa_mean: Vec<f64>,
    /// Predictive variance `Z_t P_{t|t-1} Z_t' + H`, for every `t`.
    pub osa_variance: Vec<f64>,
    /// Sum of `log N(y_t; osa_mean_t, osa_variance_t)` over observed `t`.
    pub log_likelihood: f64,
}

impl FilterResult {
    pub fn len(&self) -> usize {
        self.predicted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicted.is_empty()
    }
}

fn check_alignment(model: &SystemMatrices, init: &GaussianState, y: &TimeSeries) -> Result<()> {
    if init.dim() != model.state_dim() {
        return Err(Error::invalid(format!(
            "initial state has dimension {}, model state dimension is {}",
            init.dim(),
            model.state_dim()
        )));
    }
    if let Some(len) = model.time_varying_len() {
        if len != y.len() {
            return Err(Error::invalid(format!(
                "time-varying observation map covers {len} points, series has {}",
                y.len()
            )));
        }
    }
    Ok(())
}

/// Runs the Kalman filter over `y`.
///
/// `init` is the prior of the state at the first observation time, so the
/// first predicted distribution equals `init` exactly. Missing observations
/// skip the measurement update (filtered = predicted) and contribute nothing
/// to the log-likelihood. Covariances are re-symmetrized after every update.
pub fn kalman_filter(
    model: &SystemMatrices,
    init: &GaussianState,
    y: &TimeSeries,
) -> Result<FilterResult> {
    check_alignment(model, init, y)?;
    let n = y.len();
    let h = model.obs_variance();
    let rqr = model.process_covariance();
    let trans = model.transition();

    let mut predicted = Vec::with_capacity(n);
    let mut filtered = Vec::with_capacity(n);
    let mut osa_mean = Vec::with_capacity(n);
    let mut osa_variance = Vec::with_capacity(n);
    let mut log_likelihood = 0.0;

    let mut a = init.mean.clone();
    let mut p = symmetrize(&init.covariance);

    for t in 0..n {
        let z = model.z_row(t);
        let pz = &p * z.transpose(); // m x 1
        let f = (z * &pz)[(0, 0)] + h;
        let mean = (z * &a)[(0, 0)];
        osa_mean.push(mean);
        osa_variance.push(f);

        let (a_f, p_f) = match y.value(t) {
            Some(obs) => {
                if f <= 0.0 {
                    return Err(Error::numerical(format!(
                        "non-positive predictive variance {f} at observed time {t}"
                    )));
                }
                let v = obs - mean;
                log_likelihood -= 0.5 * (LN_2PI + f.ln() + v * v / f);
                let gain = &pz / f; // m x 1
                let a_f = &a + &gain * v;
                let p_f = symmetrize(&(&p - &gain * pz.transpose()));
                (a_f, p_f)
            }
            None => (a.clone(), p.clone()),
        };

        predicted.push(GaussianState::from_parts(a, p));
        a = trans * &a_f;
        p = symmetrize(&(trans * &p_f * trans.transpose() + &rqr));
        filtered.push(GaussianState::from_parts(a_f, p_f));
    }

    Ok(FilterResult { predicted, filtered, osa_mean, osa_variance, log_likelihood })
}

/// Solves `P_pred X = B` where `P_pred` is a (possibly singular) predicted
/// covariance: Cholesky when positive definite, pseudo-inverse otherwise.
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

/// Fixed-interval (RTS) smoother: combines a filter pass into
/// `p(a_t | y_{1..n})` for every `t`.
pub fn kalman_smooth(model: &SystemMatrices, filter: &FilterResult) -> Result<Vec<GaussianState>> {
    let n = filter.len();
    if n == 0 {
        return Err(Error::invalid("cannot smooth an empty filter result"));
    }
    let trans = model.transition();
    let mut smoothed = vec![filter.filtered[n - 1].clone(); n];

    for t in (0..n - 1).rev() {
        let p_f = &filter.filtered[t].covariance;
        let p_pred_next = &filter.predicted[t + 1].covariance;
        // Gain J_t = P_{t|t} T' P_{t+1|t}^{-1}, computed via a solve against
        // the (symmetric) predicted covariance: J' = P_pred^{-1} T P_{t|t}.
        let j_t = solve_predicted(p_pred_next, &(trans * p_f))?.transpose();

        let mean = &filter.filtered[t].mean
            + &j_t * (&smoothed[t + 1].mean - &filter.predicted[t + 1].mean);
        let cov = symmetrize(
            &(p_f + &j_t * (&smoothed[t + 1].covariance - p_pred_next) * j_t.transpose()),
        );
        smoothed[t] = GaussianState::from_parts(mean, cov);
    }
    Ok(smoothed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssm::ObsMap;
    use nalgebra::{DVector, RowDVector};

    fn local_level(obs_var: f64, level_var: f64) -> SystemMatrices {
        SystemMatrices::new(
            ObsMap::Constant(RowDVector::from_row_slice(&[1.0])),
            DMatrix::from_row_slice(1, 1, &[1.0]),
            DMatrix::from_row_slice(1, 1, &[1.0]),
            obs_var,
            DVector::from_row_slice(&[level_var]),
        )
        .unwrap()
    }

    /// Scalar reference for the local level: hand-rolled filter recursions.
    fn scalar_local_level(
        y: &[Option<f64>],
        obs_var: f64,
        level_var: f64,
        a0: f64,
        p0: f64,
    ) -> (Vec<f64>, Vec<f64>, f64) {
        let mut a = a0;
        let mut p = p0;
        let mut means = Vec::new();
        let mut vars = Vec::new();
        let mut ll = 0.0;
        for &obs in y {
            let f = p + obs_var;
            let (af, pf) = match obs {
                Some(v) => {
                    let innov = v - a;
                    ll -= 0.5 * (LN_2PI + f.ln() + innov * innov / f);
                    let k = p / f;
                    (a + k * innov, p - k * p)
                }
                None => (a, p),
            };
            means.push(af);
            vars.push(pf);
            a = af;
            p = pf + level_var;
        }
        (means, vars, ll)
    }

    #[test]
    fn matches_scalar_reference_on_local_level() {
        let y = vec![Some(1.0), None, Some(3.0), Some(2.5)];
        let model = local_level(0.8, 0.4);
        let init = GaussianState::new(
            DVector::from_row_slice(&[0.5]),
            DMatrix::from_row_slice(1, 1, &[2.0]),
        )
        .unwrap();
        let ts = TimeSeries::new(
            chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap(),
            crate::series::Frequency::Daily,
            y.clone(),
        )
        .unwrap();
        let res = kalman_filter(&model, &init, &ts).unwrap();
        let (means, vars, ll) = scalar_local_level(&y, 0.8, 0.4, 0.5, 2.0);
        for t in 0..y.len() {
            assert!((res.filtered[t].mean[0] - means[t]).abs() < 1e-12);
            assert!((res.filtered[t].covariance[(0, 0)] - vars[t]).abs() < 1e-12);
        }
        assert!((res.log_likelihood - ll).abs() < 1e-12);
    }

    #[test]
    fn missing_observation_skips_update() {
        let model = local_level(1.0, 1.0);
        let init = GaussianState::diffuse(1, 1.0);
        let ts = TimeSeries::new(
            chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap(),
            crate::series::Frequency::Daily,
            vec![Some(1.0), None, Some(2.0)],
        )
        .unwrap();
        let res = kalman_filter(&model, &init, &ts).unwrap();
        assert_eq!(res.filtered[1].mean, res.predicted[1].mean);
        assert_eq!(res.filtered[1].covariance, res.predicted[1].covariance);
    }

    #[test]
    fn all_missing_gives_zero_likelihood() {
        let model = local_level(1.0, 1.0);
        let init = GaussianState::diffuse(1, 1.0);
        let ts = TimeSeries::new(
            chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap(),
            crate::series::Frequency::Daily,
            vec![None, None],
        )
        .unwrap();
        let res = kalman_filter(&model, &init, &ts).unwrap();
        assert_eq!(res.log_likelihood, 0.0);
    }

    #[test]
    fn zero_level_variance_smooths_to_constant() {
        let model = local_level(1.0, 0.0);
        let init = GaussianState::diffuse(1, 100.0);
        let ts = TimeSeries::from_values(vec![1.0, 2.0, 0.5, 1.5]).unwrap();
        let res = kalman_filter(&model, &init, &ts).unwrap();
        let smoothed = kalman_smooth(&model, &res).unwrap();
        let first = smoothed[0].mean[0];
        for s in &smoothed {
            assert!((s.mean[0] - first).abs() < 1e-9);
        }
    }

    #[test]
    fn smoothed_variance_never_exceeds_filtered() {
        let model = local_level(0.7, 0.3);
        let init = GaussianState::diffuse(1, 10.0);
        let ts = TimeSeries::from_values(vec![1.0, -0.5, 0.8, 2.0, 1.1]).unwrap();
        let res = kalman_filter(&model, &init, &ts).unwrap();
        let smoothed = kalman_smooth(&model, &res).unwrap();
        for t in 0..ts.len() {
            assert!(
                smoothed[t].covariance[(0, 0)] <= res.filtered[t].covariance[(0, 0)] + 1e-10
            );
        }
    }

    #[test]
    fn rejects_misaligned_initial_state() {
        let model = local_level(1.0, 1.0);
        let init = GaussianState::diffuse(2, 1.0);
        let ts = TimeSeries::from_values(vec![1.0]).unwrap();
        assert!(kalman_filter(&model, &init, &ts).is_err());
    }

    #[test]
    fn degenerate_predictive_variance_is_an_error() {
        let model = local_level(0.0, 0.0);
        let init = GaussianState::fixed(DVector::from_row_slice(&[0.0]));
        let ts = TimeSeries::from_values(vec![1.0]).unwrap();
        assert!(matches!(
            kalman_filter(&model, &init, &ts),
            Err(Error::Numerical(_))
        ));
    }
}
