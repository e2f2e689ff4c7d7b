//! The Gibbs sampler over states, variances, and static coefficients.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::components::AssembledModel;
use crate::error::{Error, Result};
use crate::inference::conjugate::{draw_coefficients_from, draw_variance};
use crate::inference::priors::{InverseGammaPrior, SpikeSlabPrior};
use crate::inference::{McmcConfig, PosteriorDraws};
use crate::series::TimeSeries;
use crate::ssm::simulate_states;

/// Priors not carried by the component specs themselves.
#[derive(Debug, Clone, Default)]
pub struct Priors {
    /// Observation-variance prior; `None` resolves to the weakly
    /// informative default derived from the sample variance of `y`.
    pub observation: Option<InverseGammaPrior>,
    /// Scale of the approximately diffuse initial state covariance;
    /// `None` uses the crate default.
    pub init_scale: Option<f64>,
}

/// Runs the Gibbs sampler. Each sweep:
///
/// 1. draws a state path by simulation smoothing given current parameters,
/// 2. draws every innovation variance from its inverse-gamma full
///    conditional given that path's state innovations,
/// 3. draws the static coefficients and inclusion indicators by
///    spike-and-slab selection on the observation residuals net of the
///    state contribution,
/// 4. draws the observation variance from the remaining residuals.
///
/// The sampler is a deterministic function of `(model, y, priors, config)`:
/// rerunning with the same seed reproduces every retained draw bitwise.
pub fn run_gibbs(
    model: &AssembledModel,
    y: &TimeSeries,
    priors: &Priors,
    config: &McmcConfig,
) -> Result<PosteriorDraws> {
    config.validate()?;
    if y.len() != model.n {
        return Err(Error::invalid(format!(
            "model was assembled for {} points, series has {}",
            model.n,
            y.len()
        )));
    }
    if y.observed_count() < 3 {
        return Err(Error::invalid(
            "fitting requires at least three observed values",
        ));
    }

    let n = model.n;
    let m = model.layout.state_dim;
    let r = model.layout.innovation_dim;
    let k = model.layout.static_dim;

    let var_y = y.observed_variance();
    let obs_prior = priors
        .observation
        .unwrap_or_else(|| InverseGammaPrior::weakly_informative(var_y));
    let innovation_priors: Vec<InverseGammaPrior> = model
        .innovation_priors
        .iter()
        .map(|p| p.unwrap_or_else(|| InverseGammaPrior::weakly_informative(var_y)))
        .collect();
    let slab = SpikeSlabPrior::new(model.static_priors.clone());
    let init = match priors.init_scale {
        Some(scale) => model.init_with_scale(scale),
        None => model.default_init(),
    };

    let observed: Vec<usize> = y.observed_indices();
    let x_obs = if k > 0 {
        let mut x = DMatrix::zeros(observed.len(), k);
        for (row, &t) in observed.iter().enumerate() {
            x.row_mut(row).copy_from(&model.static_design.row(t));
        }
        x
    } else {
        DMatrix::zeros(observed.len(), 0)
    };

    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut matrices = model.matrices.clone();
    let mut h = (0.5 * var_y).max(1e-8);
    let mut q = DVector::from_element(r, (0.1 * var_y).max(1e-8));
    let mut beta = DVector::from_fn(k, |j, _| {
        let c = &model.static_priors[j];
        if c.inclusion_prob >= 0.5 {
            c.prior_mean
        } else {
            0.0
        }
    });
    let mut gamma: Vec<bool> = model
        .static_priors
        .iter()
        .map(|c| c.inclusion_prob >= 0.5)
        .collect();

    let retained = config.retained();
    let mut draws = PosteriorDraws {
        states: Vec::with_capacity(retained),
        coefficients: Vec::with_capacity(retained),
        inclusion: Vec::with_capacity(retained),
        obs_variance: Vec::with_capacity(retained),
        state_variances: Vec::with_capacity(retained),
        layout: model.layout.clone(),
        config: *config,
    };

    let transition = model.matrices.transition().clone();
    let mut residuals = Vec::with_capacity(n);

    for iteration in 0..config.iterations {
        matrices.set_obs_variance(h)?;
        matrices.set_state_variances(q.clone())?;

        // (1) State path given parameters; static contribution subtracted
        // from the observations first.
        let adjusted: Vec<Option<f64>> = (0..n)
            .map(|t| y.value(t).map(|v| v - model.static_contribution(&beta, t)))
            .collect();
        let adjusted = TimeSeries::new(y.start(), y.frequency(), adjusted).map_err(|e| {
            Error::Divergent { iteration, message: format!("adjusted series invalid: {e}") }
        })?;
        let states = simulate_states(&matrices, &init, &adjusted, &mut rng).map_err(|e| {
            Error::Divergent { iteration, message: e.to_string() }
        })?;

        // (2) Innovation variances from the path's state innovations.
        for i in 0..r {
            let row = model.layout.innovation_rows[i];
            residuals.clear();
            for t in 0..n - 1 {
                let mut predicted = 0.0;
                for j in 0..m {
                    predicted += transition[(row, j)] * states[(t, j)];
                }
                residuals.push(states[(t + 1, row)] - predicted);
            }
            q[i] = draw_variance(&residuals, &innovation_priors[i], &mut rng)?;
        }

        // (3) Static coefficients on residuals net of the state.
        let state_residual = |t: usize, obs: f64| -> f64 {
            let z = matrices.z_row(t);
            let mut fit = 0.0;
            for j in 0..m {
                fit += z[j] * states[(t, j)];
            }
            obs - fit
        };
        if k > 0 {
            let mut target = DVector::zeros(observed.len());
            for (row, &t) in observed.iter().enumerate() {
                target[row] = state_residual(t, y.value(t).expect("observed"));
            }
            beta = draw_coefficients_from(&x_obs, &target, h, &slab, &mut gamma, &mut rng)?;
        }

        // (4) Observation variance from the fully adjusted residuals.
        residuals.clear();
        for &t in &observed {
            let e = state_residual(t, y.value(t).expect("observed"))
                - model.static_contribution(&beta, t);
            residuals.push(e);
        }
        h = draw_variance(&residuals, &obs_prior, &mut rng)?;

        if !h.is_finite() || q.iter().any(|v| !v.is_finite()) || beta.iter().any(|b| !b.is_finite())
        {
            return Err(Error::Divergent {
                iteration,
                message: "non-finite parameter draw".to_string(),
            });
        }

        if iteration >= config.burn_in && (iteration - config.burn_in) % config.thin == 0 {
            draws.states.push(states);
            draws.coefficients.push(beta.clone());
            draws.inclusion.push(gamma.clone());
            draws.obs_variance.push(h);
            draws.state_variances.push(q.clone());
        }
    }

    debug_assert_eq!(draws.len(), retained);
    Ok(draws)
}
