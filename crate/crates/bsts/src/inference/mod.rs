//! Posterior inference: conjugate updates, the Gibbs sampler, multi-seed
//! empirical-Bayes calibration, and posterior summaries.

mod calibrate;
mod conjugate;
mod forecast;
mod gibbs;
mod priors;
mod summary;

pub use calibrate::{multi_seed_calibrate, CalibrationOutcome};
pub use conjugate::{draw_coefficients, draw_coefficients_from, draw_variance};
pub use forecast::{one_step_ahead, OsaForecast, OsaMethod};
pub use gibbs::{run_gibbs, Priors};
pub use priors::{CoefPrior, InverseGammaPrior, SpikeSlabPrior};
pub use summary::{
    dynamic_coefficient_paths, hdi, posterior_summary, summarize_coefficients,
    variance_summary, CoefficientPath, CoefficientSummary, SummaryTable, VarianceSummary,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::components::ModelLayout;
use crate::error::{Error, Result};

/// Sampler schedule: total sweeps, how many lead sweeps are discarded, the
/// thinning stride over the remainder, and the generator seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

impl McmcConfig {
    pub fn new(iterations: usize, burn_in: usize, thin: usize, seed: u64) -> Result<Self> {
        let config = McmcConfig { iterations, burn_in, thin, seed };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::invalid("iterations must be positive"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::invalid(format!(
                "burn-in {} must be smaller than iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::invalid("thinning stride must be at least 1"));
        }
        Ok(())
    }

    /// Number of draws the schedule retains:
    /// `ceil((iterations - burn_in) / thin)`.
    pub fn retained(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }
}

/// Archive of retained Gibbs draws, together with the layout and schedule
/// that produced them.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    /// Per draw: the sampled state path, `n x m` (one state per row).
    pub states: Vec<DMatrix<f64>>,
    /// Per draw: the static coefficient vector (excluded entries are exactly
    /// zero).
    pub coefficients: Vec<DVector<f64>>,
    /// Per draw: the inclusion indicators; `inclusion[d][j]` is true iff
    /// `coefficients[d][j] != 0` was drawn from the slab.
    pub inclusion: Vec<Vec<bool>>,
    /// Per draw: observation variance.
    pub obs_variance: Vec<f64>,
    /// Per draw: innovation variances in layout order.
    pub state_variances: Vec<DVector<f64>>,
    pub layout: ModelLayout,
    pub config: McmcConfig,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.obs_variance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs_variance.is_empty()
    }

    /// Fraction of retained draws including each static column.
    pub fn inclusion_frequency(&self) -> Vec<f64> {
        let k = self.layout.static_dim;
        let mut freq = vec![0.0; k];
        for draw in &self.inclusion {
            for (j, included) in draw.iter().enumerate() {
                if *included {
                    freq[j] += 1.0;
                }
            }
        }
        let n = self.len().max(1) as f64;
        freq.iter_mut().for_each(|f| *f /= n);
        freq
    }

    /// Posterior mean of each static coefficient, zeros included.
    pub fn coefficient_means(&self) -> Vec<f64> {
        let k = self.layout.static_dim;
        let mut means = vec![0.0; k];
        for beta in &self.coefficients {
            for j in 0..k {
                means[j] += beta[j];
            }
        }
        let n = self.len().max(1) as f64;
        means.iter_mut().for_each(|m| *m /= n);
        means
    }

    /// Posterior mean of the observation variance.
    pub fn obs_variance_mean(&self) -> f64 {
        crate::util::mean(&self.obs_variance)
    }

    /// Posterior mean of each innovation variance.
    pub fn state_variance_means(&self) -> DVector<f64> {
        let r = self.layout.innovation_dim;
        let mut means = DVector::zeros(r);
        for q in &self.state_variances {
            means += q;
        }
        means / self.len().max(1) as f64
    }
}
