//! The six subcommands and the glue they share: component construction from
//! configuration, output collection, and manifest emission.

pub mod calibrate;
pub mod cluster;
pub mod compare;
pub mod decompose;
pub mod fit;
pub mod periodogram;

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use bsts::components::{assemble, AssembledModel, ComponentSpec};
use bsts::inference::SpikeSlabPrior;

use crate::config::{ComponentConfig, Manifest, RunConfig};
use crate::ingest::Dataset;

/// A resolved invocation: the configuration (already loaded, seed-overridden,
/// and validated), the destination directory, and the verbosity flag.
pub struct Run {
    pub config: RunConfig,
    pub output_dir: PathBuf,
    pub quiet: bool,
}

impl Run {
    /// Progress note on stderr; silenced by --quiet.
    pub fn note(&self, message: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", message.as_ref());
        }
    }

    /// Starts an output collection for this run.
    pub fn outputs(&self) -> Outputs {
        Outputs { dir: self.output_dir.clone(), files: Vec::new() }
    }
}

/// Collects named output files in memory, then writes them together with a
/// manifest that lists every file (itself included) and embeds the resolved
/// configuration, so the whole directory can be reproduced from the manifest
/// alone.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }

    pub fn commit(
        self,
        command: &str,
        config: &RunConfig,
        details: serde_json::Map<String, serde_json::Value>,
    ) -> Result<Vec<String>> {
        let mut names: Vec<String> = self.files.iter().map(|(n, _)| n.clone()).collect();
        names.push("manifest.json".to_string());
        names.sort();

        let manifest = Manifest::new(command, config.clone(), names.clone(), details)?;
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("cannot create {}", self.dir.display()))?;
        for (name, content) in &self.files {
            let path = self.dir.join(name);
            fs::write(&path, content)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        let manifest_path = self.dir.join("manifest.json");
        fs::write(&manifest_path, manifest.to_json()?)
            .with_context(|| format!("cannot write {}", manifest_path.display()))?;
        Ok(names)
    }
}

/// Builds the library component list from the configuration: resolves
/// intervention onset dates against the data grid, attaches the configured
/// spike-and-slab prior to the static regression, and hands both regression
/// kinds the loaded design matrix.
pub fn build_components(
    config: &RunConfig,
    dataset: &Dataset,
) -> Result<Vec<ComponentSpec>> {
    if config.components.is_empty() {
        bail!("the configuration lists no components");
    }
    let k = dataset.design.ncols();
    let mut specs = Vec::with_capacity(config.components.len());
    for component in &config.components {
        let spec = match component {
            ComponentConfig::LocalLevel => ComponentSpec::local_level(),
            ComponentConfig::LocalLinearTrend => ComponentSpec::local_linear_trend(),
            ComponentConfig::Seasonal { period } => {
                ComponentSpec::Seasonal { period: *period, variance_prior: None }
            }
            ComponentConfig::Intervention { kind, onset, onset_date, dynamic } => {
                let onset = match (onset, onset_date) {
                    (Some(t), None) => *t,
                    (None, Some(date)) => dataset
                        .dates
                        .iter()
                        .position(|d| d == date)
                        .with_context(|| {
                            format!(
                                "intervention onset {date} is not on the data grid \
                                 ({} to {})",
                                dataset.dates[0],
                                dataset.dates[dataset.dates.len() - 1]
                            )
                        })?,
                    _ => bail!("intervention needs exactly one of onset and onset_date"),
                };
                ComponentSpec::Intervention {
                    kind: (*kind).into(),
                    onset,
                    dynamic: *dynamic,
                    coefficient_prior: None,
                    variance_prior: None,
                }
            }
            ComponentConfig::StaticRegression => {
                if k == 0 {
                    bail!("a static_regression component needs regressor columns");
                }
                let prior = SpikeSlabPrior::uniform(
                    k,
                    config.priors.inclusion_prob(),
                    config.priors.slab_variance(),
                )?;
                ComponentSpec::StaticRegression {
                    design: dataset.design.clone(),
                    labels: dataset.labels.clone(),
                    prior: Some(prior),
                }
            }
            ComponentConfig::DynamicRegression => {
                if k == 0 {
                    bail!("a dynamic_regression component needs regressor columns");
                }
                ComponentSpec::DynamicRegression {
                    design: dataset.design.clone(),
                    labels: dataset.labels.clone(),
                    variance_priors: None,
                }
            }
        };
        specs.push(spec);
    }
    Ok(specs)
}

/// Assembles the configured model over the loaded dataset.
pub fn assemble_from_config(
    config: &RunConfig,
    dataset: &Dataset,
) -> Result<AssembledModel> {
    let components = build_components(config, dataset)?;
    Ok(assemble(&components, dataset.n())?)
}
