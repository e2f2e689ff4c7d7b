//! Multi-seed empirical-Bayes calibration of the spike-and-slab prior.

use rayon::prelude::*;

use crate::components::AssembledModel;
use crate::error::{Error, Result};
use crate::inference::gibbs::{run_gibbs, Priors};
use crate::inference::priors::SpikeSlabPrior;
use crate::inference::McmcConfig;
use crate::series::TimeSeries;

/// Result of a calibration run: the updated prior and per-chain diagnostics.
#[derive(Debug, Clone)]
pub struct CalibrationOutcome {
    /// Prior with inclusion probabilities replaced by across-chain average
    /// inclusion frequencies (and, when requested, prior means replaced by
    /// across-chain average posterior coefficient means).
    pub updated: SpikeSlabPrior,
    /// `per_chain_inclusion[c][j]`: inclusion frequency of column `j` in
    /// chain `c`.
    pub per_chain_inclusion: Vec<Vec<f64>>,
    /// `per_chain_coefficient_means[c][j]`: posterior mean (zeros included)
    /// of column `j` in chain `c`.
    pub per_chain_coefficient_means: Vec<Vec<f64>>,
    /// Seed used by each chain, derived deterministically from the base
    /// seed in the sampler config.
    pub seeds: Vec<u64>,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chain `c` under base seed `base`.
pub fn chain_seed(base: u64, c: usize) -> u64 {
    splitmix64(base.wrapping_add((c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Runs `chains` independent Gibbs samplers with seeds derived from the
/// config's base seed, then replaces each column's prior inclusion
/// probability with its across-chain average inclusion frequency. When
/// `update_means` is set, prior means are likewise replaced by across-chain
/// average posterior coefficient means (off by default: the updated means
/// re-enter the likelihood through the slab and double-count the data).
///
/// Chains run independently (in parallel) and are merged in chain order, so
/// the outcome is a deterministic function of the inputs.
pub fn multi_seed_calibrate(
    model: &AssembledModel,
    y: &TimeSeries,
    priors: &Priors,
    config: &McmcConfig,
    chains: usize,
    update_means: bool,
) -> Result<CalibrationOutcome> {
    config.validate()?;
    if chains == 0 {
        return Err(Error::invalid("calibration needs at least one chain"));
    }
    if model.layout.static_dim == 0 {
        return Err(Error::invalid(
            "calibration requires a static regression component to update",
        ));
    }

    let seeds: Vec<u64> = (0..chains).map(|c| chain_seed(config.seed, c)).collect();

    let chain_results: Vec<Result<(Vec<f64>, Vec<f64>)>> = seeds
        .par_iter()
        .map(|&seed| {
            let chain_config = McmcConfig { seed, ..*config };
            let draws = run_gibbs(model, y, priors, &chain_config)
                .map_err(|e| Error::ChainFailed { seed, source: Box::new(e) })?;
            Ok((draws.inclusion_frequency(), draws.coefficient_means()))
        })
        .collect();

    let k = model.layout.static_dim;
    let mut per_chain_inclusion = Vec::with_capacity(chains);
    let mut per_chain_means = Vec::with_capacity(chains);
    for result in chain_results {
        let (inclusion, means) = result?;
        per_chain_inclusion.push(inclusion);
        per_chain_means.push(means);
    }

    let mut updated = SpikeSlabPrior::new(model.static_priors.clone());
    for j in 0..k {
        let avg_inclusion =
            per_chain_inclusion.iter().map(|c| c[j]).sum::<f64>() / chains as f64;
        updated.coefficients[j].inclusion_prob = avg_inclusion;
        if update_means {
            updated.coefficients[j].prior_mean =
                per_chain_means.iter().map(|c| c[j]).sum::<f64>() / chains as f64;
        }
    }

    Ok(CalibrationOutcome {
        updated,
        per_chain_inclusion,
        per_chain_coefficient_means: per_chain_means,
        seeds,
    })
}
