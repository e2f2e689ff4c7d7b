//! One-step-ahead predictive distributions from fitted models.

use nalgebra::DVector;

use crate::components::AssembledModel;
use crate::error::{Error, Result};
use crate::inference::PosteriorDraws;
use crate::series::TimeSeries;
use crate::ssm::kalman_filter;

/// How the one-step-ahead predictive moments are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsaMethod {
    /// One filter pass at the posterior-mean parameters (fast default).
    PosteriorMean,
    /// One filter pass per retained draw, averaged; the predictive variance
    /// combines the within-draw variance with the spread of the per-draw
    /// means (law of total variance).
    PerDraw,
}

/// One-step-ahead predictive mean and variance of the observation at every
/// time point (including missing ones, whose predictive moments are still
/// defined).
#[derive(Debug, Clone)]
pub struct OsaForecast {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

fn forecast_at(
    model: &AssembledModel,
    y: &TimeSeries,
    obs_variance: f64,
    state_variances: &DVector<f64>,
    beta: &DVector<f64>,
    init_scale: Option<f64>,
) -> Result<OsaForecast> {
    let mut matrices = model.matrices.clone();
    matrices.set_obs_variance(obs_variance)?;
    matrices.set_state_variances(state_variances.clone())?;
    let adjusted: Vec<Option<f64>> = (0..model.n)
        .map(|t| y.value(t).map(|v| v - model.static_contribution(beta, t)))
        .collect();
    let adjusted = TimeSeries::new(y.start(), y.frequency(), adjusted)?;
    let init = match init_scale {
        Some(scale) => model.init_with_scale(scale),
        None => model.default_init(),
    };
    let filter = kalman_filter(&matrices, &init, &adjusted)?;
    let mean = (0..model.n)
        .map(|t| filter.osa_mean[t] + model.static_contribution(beta, t))
        .collect();
    Ok(OsaForecast { mean, variance: filter.osa_variance })
}

/// Computes the one-step-ahead predictive distribution of every observation
/// under the fitted model.
pub fn one_step_ahead(
    model: &AssembledModel,
    y: &TimeSeries,
    draws: &PosteriorDraws,
    method: OsaMethod,
) -> Result<OsaForecast> {
    if draws.is_empty() {
        return Err(Error::invalid("no retained draws"));
    }
    if draws.layout != model.layout {
        return Err(Error::invalid(
            "posterior draws were produced by a model with a different layout",
        ));
    }
    if y.len() != model.n {
        return Err(Error::invalid(format!(
            "model was assembled for {} points, series has {}",
            model.n,
            y.len()
        )));
    }
    match method {
        OsaMethod::PosteriorMean => {
            let beta = DVector::from_vec(draws.coefficient_means());
            forecast_at(
                model,
                y,
                draws.obs_variance_mean(),
                &draws.state_variance_means(),
                &beta,
                None,
            )
        }
        OsaMethod::PerDraw => {
            let n = model.n;
            let d = draws.len() as f64;
            let mut mean = vec![0.0; n];
            let mut mean_sq = vec![0.0; n];
            let mut within = vec![0.0; n];
            for idx in 0..draws.len() {
                let f = forecast_at(
                    model,
                    y,
                    draws.obs_variance[idx],
                    &draws.state_variances[idx],
                    &draws.coefficients[idx],
                    None,
                )?;
                for t in 0..n {
                    mean[t] += f.mean[t] / d;
                    mean_sq[t] += f.mean[t] * f.mean[t] / d;
                    within[t] += f.variance[t] / d;
                }
            }
            let variance = (0..n)
                .map(|t| within[t] + (mean_sq[t] - mean[t] * mean[t]).max(0.0))
                .collect();
            Ok(OsaForecast { mean, variance })
        }
    }
}
