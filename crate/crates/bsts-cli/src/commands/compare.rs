//! `compare`: score the six canonical specifications (level and trend, each
//! bare or with one of the two regression types) on one-step-ahead accuracy
//! over a common set of evaluation points.

use anyhow::{Context, Result};
use bsts::evaluation::{canonical_specs, compare_models};
use bsts::inference::OsaMethod;

use crate::commands::Run;
use crate::{ingest, report};

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    let specs = canonical_specs(&dataset.design, &dataset.labels)
        .context("the comparison needs at least one regressor column")?;
    let mcmc = run.config.mcmc.build()?;

    run.note(format!(
        "compare: fitting {} specifications on {} points",
        specs.len(),
        dataset.n()
    ));
    let report_table =
        compare_models(&dataset.series, &specs, &mcmc, OsaMethod::PosteriorMean)
            .context("comparison failed")?;

    let mut outputs = run.outputs();
    outputs.add("report.csv", report_table.to_csv());
    outputs.add("report.txt", report_table.to_table());

    let mut details = serde_json::Map::new();
    report::standardization_details(&dataset, &mut details);

    let names = outputs.commit("compare", &run.config, details)?;
    run.note(format!(
        "compare: wrote {} to {}",
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
