//! Run configuration: the JSON schema every subcommand consumes, manifest
//! loading, and the resolution step that pins seeds and paths.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bsts::components::InterventionKind;
use bsts::inference::{InverseGammaPrior, McmcConfig, Priors};
use bsts::Frequency;
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

fn default_true() -> bool {
    true
}

fn default_thin() -> usize {
    1
}

/// Intervention shape, as written in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterventionShape {
    Pulse,
    LevelShift,
    SlopeShift,
}

impl From<InterventionShape> for InterventionKind {
    fn from(shape: InterventionShape) -> Self {
        match shape {
            InterventionShape::Pulse => InterventionKind::Pulse,
            InterventionShape::LevelShift => InterventionKind::LevelShift,
            InterventionShape::SlopeShift => InterventionKind::SlopeShift,
        }
    }
}

/// One additive model component, as written in configuration files.
/// Regression components draw their design matrix from the configured
/// regressor columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComponentConfig {
    LocalLevel,
    LocalLinearTrend,
    Seasonal {
        period: usize,
    },
    Intervention {
        kind: InterventionShape,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        onset: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        onset_date: Option<NaiveDate>,
        #[serde(default)]
        dynamic: bool,
    },
    StaticRegression,
    DynamicRegression,
}

/// Inverse-gamma weight pair for a variance prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariancePriorConfig {
    pub shape: f64,
    pub scale: f64,
}

impl VariancePriorConfig {
    pub fn build(&self) -> Result<InverseGammaPrior> {
        InverseGammaPrior::new(self.shape, self.scale)
            .context("invalid observation-variance prior")
    }
}

/// Prior settings. Anything left unset falls back to the library defaults:
/// a weakly informative data-scale variance prior, inclusion probability
/// 0.5, and unit slab variance on standardized data.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriorsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observation: Option<VariancePriorConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusion_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slab_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_scale: Option<f64>,
}

impl PriorsConfig {
    pub fn sampler_priors(&self) -> Result<Priors> {
        Ok(Priors {
            observation: self.observation.map(|p| p.build()).transpose()?,
            init_scale: self.init_scale,
        })
    }

    pub fn inclusion_prob(&self) -> f64 {
        self.inclusion_prob.unwrap_or(0.5)
    }

    pub fn slab_variance(&self) -> f64 {
        self.slab_variance.unwrap_or(1.0)
    }
}

/// Sampler schedule section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McmcSection {
    pub iterations: usize,
    pub burn_in: usize,
    #[serde(default = "default_thin")]
    pub thin: usize,
    pub seed: u64,
}

impl McmcSection {
    pub fn build(&self) -> Result<McmcConfig> {
        McmcConfig::new(self.iterations, self.burn_in, self.thin, self.seed)
            .context("invalid sampler schedule")
    }
}

/// Multi-chain prior calibration settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationConfig {
    pub chains: usize,
    /// Also replace prior means with across-chain coefficient means. Off by
    /// default: reusing the data for both means and inclusion double-counts
    /// it.
    pub update_means: bool,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig { chains: 30, update_means: false }
    }
}

/// A complete run configuration. Every subcommand reads the same schema and
/// uses the sections it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// CSV data file; a relative path is taken relative to the directory
    /// containing the configuration file.
    pub data: PathBuf,
    /// Name of the target column.
    pub target: String,
    /// Names of the regressor columns, in design-matrix order.
    #[serde(default)]
    pub regressors: Vec<String>,
    pub frequency: Frequency,
    /// Standardize the target and every regressor column before fitting.
    #[serde(default = "default_true")]
    pub standardize: bool,
    #[serde(default)]
    pub components: Vec<ComponentConfig>,
    #[serde(default)]
    pub priors: PriorsConfig,
    pub mcmc: McmcSection,
    #[serde(default)]
    pub calibration: CalibrationConfig,
    /// Flat cluster count for the cluster subcommand (omit for the
    /// dendrogram alone).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    /// Default output directory; overridden by --output and never stored in
    /// manifests, so reruns into different directories stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target.trim().is_empty() {
            bail!("target column name is empty");
        }
        for name in &self.regressors {
            if name.trim().is_empty() {
                bail!("regressor column name is empty");
            }
            if name == &self.target {
                bail!("column {name:?} is both the target and a regressor");
            }
            if self.regressors.iter().filter(|r| *r == name).count() > 1 {
                bail!("regressor column {name:?} is listed twice");
            }
        }
        self.mcmc.build()?;
        if let Some(p) = self.priors.inclusion_prob {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                bail!("inclusion probability must lie in [0, 1], got {p}");
            }
        }
        if let Some(v) = self.priors.slab_variance {
            if !v.is_finite() || v <= 0.0 {
                bail!("slab variance must be positive and finite, got {v}");
            }
        }
        if let Some(p) = self.priors.observation {
            p.build()?;
        }
        if self.calibration.chains == 0 {
            bail!("calibration requires at least one chain");
        }
        if let Some(k) = self.clusters {
            if k < 1 {
                bail!("cluster count must be at least 1");
            }
        }
        for component in &self.components {
            if let ComponentConfig::Intervention { onset, onset_date, .. } = component {
                match (onset, onset_date) {
                    (Some(_), Some(_)) => {
                        bail!("intervention sets both onset and onset_date; pick one")
                    }
                    (None, None) => {
                        bail!("intervention needs an onset index or an onset_date")
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Does the component list contain a regression term of either kind?
    pub fn has_regression_component(&self) -> bool {
        self.components.iter().any(|c| {
            matches!(
                c,
                ComponentConfig::StaticRegression | ComponentConfig::DynamicRegression
            )
        })
    }
}

/// Loads a configuration from either a bare `RunConfig` JSON file or a
/// manifest written by a previous run (whose embedded, already-resolved
/// configuration is extracted), then resolves it: applies the seed
/// override, anchors the data path, and strips the output directory.
/// Returns the resolved configuration ready for hashing and execution.
pub fn load_and_resolve(
    config_path: &Path,
    seed_override: Option<u64>,
) -> Result<RunConfig> {
    let text = fs::read_to_string(config_path)
        .with_context(|| format!("cannot read configuration {}", config_path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", config_path.display()))?;
    let config_value = if value.get("config_hash").is_some() {
        value
            .get("config")
            .cloned()
            .with_context(|| format!("{} looks like a manifest but has no config", config_path.display()))?
    } else {
        value
    };
    let mut config: RunConfig = serde_json::from_value(config_value)
        .with_context(|| format!("{} does not match the configuration schema", config_path.display()))?;

    if let Some(seed) = seed_override {
        config.mcmc.seed = seed;
    }
    if config.data.is_relative() {
        let base = config_path.parent().unwrap_or_else(|| Path::new("."));
        config.data = base.join(&config.data);
    }
    config.data = config
        .data
        .canonicalize()
        .with_context(|| format!("data file {} not found", config.data.display()))?;
    config.validate()?;
    Ok(config)
}

/// SHA-256 of the resolved configuration's canonical JSON serialization.
pub fn config_hash(config: &RunConfig) -> Result<String> {
    let bytes = serde_json::to_vec(config).context("configuration is not serializable")?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

/// Everything a run records alongside its outputs: rerunning any subcommand
/// with the manifest as its configuration reproduces the outputs
/// byte-for-byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub config_hash: String,
    /// Effective base seed of the run (after any --seed override).
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    /// Files written next to this manifest, sorted by name.
    pub outputs: Vec<String>,
    /// Command-specific facts: derived seeds, standardization constants,
    /// dominant periods, and the like.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
    /// The fully resolved configuration the run executed.
    pub config: RunConfig,
}

impl Manifest {
    pub fn new(
        command: &str,
        config: RunConfig,
        outputs: Vec<String>,
        details: serde_json::Map<String, serde_json::Value>,
    ) -> Result<Self> {
        let mut versions = BTreeMap::new();
        versions.insert("bsts".to_string(), env!("CARGO_PKG_VERSION").to_string());
        versions.insert("bsts-cli".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Ok(Manifest {
            command: command.to_string(),
            config_hash: config_hash(&config)?,
            seed: config.mcmc.seed,
            versions,
            outputs,
            details,
            config,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text =
            serde_json::to_string_pretty(self).context("manifest is not serializable")?;
        text.push('\n');
        Ok(text)
    }
}
