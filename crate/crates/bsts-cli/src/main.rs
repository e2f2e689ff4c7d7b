use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use bsts_cli::commands::{self, Run};
use bsts_cli::config;

#[derive(Parser)]
#[command(
    name = "bsts",
    version,
    about = "Bayesian structural time series: fit, calibrate, compare, \
             decompose, cluster, and periodogram runs from a JSON configuration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration: a config JSON file, or the manifest.json of a
    /// previous run to reproduce it.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override the sampler base seed from the configuration.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Output directory (default: the configuration's `output`, else
    /// ./bsts-output).
    #[arg(long, value_name = "DIR")]
    output: Option<PathBuf>,

    /// Thread count for the parallel sections (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Suppress progress notes on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the configured model: coefficient and variance summaries, the
    /// retained draw archive, and the one-step-ahead forecast.
    Fit(Common),
    /// Run independent chains, turn across-chain inclusion frequencies into
    /// the prior, and refit under the calibrated prior.
    Calibrate(Common),
    /// Score the six canonical specifications on one-step-ahead accuracy
    /// (level/trend, each bare or with static/dynamic regression).
    Compare(Common),
    /// Fit and split the fitted mean into per-component contributions.
    Decompose(Common),
    /// Cluster the regressor columns by trajectory shape (DTW distance,
    /// average linkage).
    Cluster(Common),
    /// Sample spectrum of the target column.
    Periodogram(Common),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common, fn(&Run) -> Result<()>) {
        match self {
            Command::Fit(c) => ("fit", c, commands::fit::run),
            Command::Calibrate(c) => ("calibrate", c, commands::calibrate::run),
            Command::Compare(c) => ("compare", c, commands::compare::run),
            Command::Decompose(c) => ("decompose", c, commands::decompose::run),
            Command::Cluster(c) => ("cluster", c, commands::cluster::run),
            Command::Periodogram(c) => ("periodogram", c, commands::periodogram::run),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, handler) = cli.command.parts();
    match execute(common, handler) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("bsts {name}: {error:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(common: &Common, handler: fn(&Run) -> Result<()>) -> Result<()> {
    if let Some(threads) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot size the thread pool")?;
    }
    let mut config = config::load_and_resolve(&common.config, common.seed)?;
    // The output directory is resolved here and dropped from the stored
    // configuration, so reruns into different directories stay
    // byte-identical.
    let output_dir = common
        .output
        .clone()
        .or_else(|| config.output.take())
        .unwrap_or_else(|| PathBuf::from("bsts-output"));
    let run = Run { config, output_dir, quiet: common.quiet };
    handler(&run)
}
