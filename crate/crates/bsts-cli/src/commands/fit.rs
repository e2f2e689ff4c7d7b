//! `fit`: sample the posterior of the configured model and write the
//! coefficient summary, variance summary, draw archive, and one-step-ahead
//! forecast.

use anyhow::{Context, Result};
use bsts::inference::{
    one_step_ahead, posterior_summary, run_gibbs, variance_summary, OsaMethod,
};

use crate::commands::{assemble_from_config, Run};
use crate::{ingest, report};

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    let model = assemble_from_config(&run.config, &dataset)?;
    let priors = run.config.priors.sampler_priors()?;
    let mcmc = run.config.mcmc.build()?;

    run.note(format!(
        "fit: {} points, {} states, {} static coefficients",
        dataset.n(),
        model.layout.state_dim,
        model.layout.static_dim
    ));
    let draws = run_gibbs(&model, &dataset.series, &priors, &mcmc)
        .context("sampling failed")?;

    let mut outputs = run.outputs();
    if model.layout.static_dim > 0 {
        let summary = posterior_summary(&draws)?;
        outputs.add("summary.csv", report::summary_csv(&summary)?);
        outputs.add("summary.txt", report::summary_text(&summary));
    }
    outputs.add("variances.csv", report::variances_csv(&variance_summary(&draws)?)?);
    outputs.add("draws.csv", report::draws_csv(&draws)?);

    let observed: Vec<Option<f64>> =
        (0..dataset.n()).map(|t| dataset.series.value(t)).collect();
    let forecast =
        one_step_ahead(&model, &dataset.series, &draws, OsaMethod::PosteriorMean)?;
    outputs.add(
        "forecast.csv",
        report::forecast_csv(&dataset.dates, &observed, &forecast.mean, &forecast.variance)?,
    );

    let mut details = serde_json::Map::new();
    report::standardization_details(&dataset, &mut details);
    details.insert("retained_draws".into(), draws.len().into());

    let names = outputs.commit("fit", &run.config, details)?;
    run.note(format!(
        "fit: retained {} draws; wrote {} to {}",
        draws.len(),
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
