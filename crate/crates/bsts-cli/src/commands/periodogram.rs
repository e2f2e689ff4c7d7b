//! `periodogram`: sample spectrum of the target column, for reading off
//! dominant seasonal periods.

use anyhow::{bail, Result};
use bsts::preprocessing::periodogram;

use crate::commands::Run;
use crate::{ingest, report};

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    if dataset.series.observed_count() != dataset.n() {
        bail!(
            "the periodogram needs a fully observed target; {} of {} values \
             are missing",
            dataset.n() - dataset.series.observed_count(),
            dataset.n()
        );
    }
    let values: Vec<f64> = dataset.series.observed_values();
    let spectrum = periodogram(&values)?;

    let mut outputs = run.outputs();
    outputs.add("periodogram.csv", report::periodogram_csv(&spectrum)?);

    let mut details = serde_json::Map::new();
    report::standardization_details(&dataset, &mut details);
    details.insert("dominant_period".into(), spectrum.dominant_period.into());
    details.insert("dominant_frequency".into(), spectrum.dominant_frequency().into());

    let names = outputs.commit("periodogram", &run.config, details)?;
    run.note(format!(
        "periodogram: dominant period {}; wrote {} to {}",
        spectrum.dominant_period,
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
