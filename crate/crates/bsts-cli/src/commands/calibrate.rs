//! `calibrate`: run many independent chains, replace each coefficient's
//! prior inclusion probability with its across-chain inclusion frequency,
//! then refit once under the calibrated prior and report the final
//! coefficient summary.

use anyhow::{bail, Context, Result};
use bsts::inference::{
    multi_seed_calibrate, posterior_summary, run_gibbs, McmcConfig,
};

use crate::commands::{assemble_from_config, Run};
use crate::{ingest, report};

/// Salt XORed into the base seed for the post-calibration refit, so the
/// final fit does not replay any calibration chain's random stream.
const REFIT_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    let mut model = assemble_from_config(&run.config, &dataset)?;
    if model.layout.static_dim == 0 {
        bail!(
            "calibration updates a static regression prior; add a \
             static_regression component (with regressor columns) to the \
             configuration"
        );
    }
    let priors = run.config.priors.sampler_priors()?;
    let mcmc = run.config.mcmc.build()?;
    let chains = run.config.calibration.chains;

    run.note(format!(
        "calibrate: {} chains x {} iterations on {} coefficients",
        chains,
        run.config.mcmc.iterations,
        model.layout.static_dim
    ));
    let initial = model.static_priors.clone();
    let outcome = multi_seed_calibrate(
        &model,
        &dataset.series,
        &priors,
        &mcmc,
        chains,
        run.config.calibration.update_means,
    )
    .context("calibration chains failed")?;

    let labels = model.layout.static_labels.clone();
    let mut outputs = run.outputs();
    outputs.add("calibrated.csv", report::calibrated_csv(&labels, &initial, &outcome)?);
    outputs.add("per_chain.csv", report::per_chain_csv(&labels, &outcome)?);

    // Final fit under the calibrated prior, on a seed disjoint from every
    // chain seed.
    let refit_seed = run.config.mcmc.seed ^ REFIT_SEED_SALT;
    let refit_config = McmcConfig { seed: refit_seed, ..mcmc };
    model.static_priors = outcome.updated.coefficients.clone();
    run.note(format!("calibrate: refitting under the calibrated prior (seed {refit_seed})"));
    let draws = run_gibbs(&model, &dataset.series, &priors, &refit_config)
        .context("post-calibration refit failed")?;
    let summary = posterior_summary(&draws)?;
    outputs.add("summary.csv", report::summary_csv(&summary)?);
    outputs.add("summary.txt", report::summary_text(&summary));

    let mut details = serde_json::Map::new();
    report::standardization_details(&dataset, &mut details);
    details.insert("chain_seeds".into(), outcome.seeds.clone().into());
    details.insert("refit_seed".into(), refit_seed.into());
    details.insert("retained_draws".into(), draws.len().into());

    let names = outputs.commit("calibrate", &run.config, details)?;
    run.note(format!(
        "calibrate: wrote {} to {}",
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
