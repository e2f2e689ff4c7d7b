//! `cluster`: hierarchically cluster the regressor columns by trajectory
//! shape (standardized, dynamic-time-warping distance, average linkage).

use anyhow::{bail, Result};
use bsts::preprocessing::cluster_trends;

use crate::commands::Run;
use crate::{ingest, report};

pub fn run(run: &Run) -> Result<()> {
    let dataset = ingest::load(&run.config)?;
    if dataset.labels.len() < 2 {
        bail!("clustering needs at least two regressor columns");
    }

    // Clustering works on the raw columns: cluster_trends standardizes
    // internally, so the configuration's standardize flag has no effect here.
    let named: Vec<(String, Vec<f64>)> = dataset
        .labels
        .iter()
        .cloned()
        .zip(dataset.raw_regressors.iter().cloned())
        .collect();
    run.note(format!("cluster: {} series of length {}", named.len(), dataset.n()));
    let result = cluster_trends(&named, run.config.clusters)?;

    let mut outputs = run.outputs();
    outputs.add("distances.csv", report::distances_csv(&result)?);
    outputs.add("merges.csv", report::merges_csv(&result)?);
    if let Some(assignments) = report::assignments_csv(&result)? {
        outputs.add("assignments.csv", assignments);
    }

    let mut details = serde_json::Map::new();
    if let Some(k) = run.config.clusters {
        details.insert("clusters".into(), k.into());
    }

    let names = outputs.commit("cluster", &run.config, details)?;
    run.note(format!(
        "cluster: wrote {} to {}",
        names.join(", "),
        run.output_dir.display()
    ));
    Ok(())
}
