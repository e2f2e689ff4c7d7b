//! `decompose`: fit the configured model and split the fitted observation
//! mean into per-component contributions with credible bands.

use anyhow::{Context, Result};
use bsts::components::decompose;
use bsts::inference::run_gibbs;

use crate::commands::{assemble_from_config, Run};
use crate::{ingest, report};

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    let model = assemble_from_config(&run.config, &dataset)?;
    let priors = run.config.priors.sampler_priors()?;
    let mcmc = run.config.mcmc.build()?;

    run.note(format!(
        "decompose: fitting {} components on {} points",
        run.config.components.len(),
        dataset.n()
    ));
    let draws = run_gibbs(&model, &dataset.series, &priors, &mcmc)
        .context("sampling failed")?;
    let decomposition = decompose(&draws, &model)?;

    let mut outputs = run.outputs();
    outputs.add(
        "components.csv",
        report::decomposition_csv(&dataset.dates, &decomposition)?,
    );

    let mut details = serde_json::Map::new();
    report::standardization_details(&dataset, &mut details);
    let component_names: Vec<serde_json::Value> = decomposition
        .components
        .iter()
        .map(|c| c.name.clone().into())
        .collect();
    details.insert("components".into(), component_names.into());

    let names = outputs.commit("decompose", &run.config, details)?;
    run.note(format!(
        "decompose: wrote {} to {}",
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
