//! Output rendering: full-precision CSV files, three-decimal human tables,
//! and the draw-archive format that fits can be re-summarized from.

use anyhow::{bail, Context, Result};
use bsts::components::Decomposition;
use bsts::inference::{
    summarize_coefficients, CalibrationOutcome, CoefPrior, PosteriorDraws, SummaryTable,
    VarianceSummary,
};
use bsts::preprocessing::{ClusterResult, Periodogram};
use chrono::NaiveDate;

use crate::ingest::Dataset;

/// Full-precision decimal text for a float: the shortest string that parses
/// back to the identical bits, never in scientific notation.
pub fn float(v: f64) -> String {
    format!("{v}")
}

/// Three-decimal text for human-readable tables.
pub fn fixed3(v: f64) -> String {
    format!("{v:.3}")
}

/// In-memory CSV builder with standard quoting.
struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    fn new() -> Self {
        Csv { writer: csv::Writer::from_writer(Vec::new()) }
    }

    fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.writer.write_record(fields.into_iter().map(|f| f.as_ref().to_string()))?;
        Ok(())
    }

    fn finish(self) -> Result<String> {
        let bytes = self.writer.into_inner().context("flushing CSV buffer")?;
        Ok(String::from_utf8(bytes).context("CSV output is not UTF-8")?)
    }
}

/// Header of the coefficient summary table, matching the reporting format
/// the whole pipeline targets.
pub const SUMMARY_HEADER: [&str; 5] =
    ["Variable", "Mean", "2.5%", "97.5%", "Non-zero probability"];

/// Coefficient summary as CSV (full precision).
pub fn summary_csv(table: &SummaryTable) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(SUMMARY_HEADER)?;
    for row in &table.rows {
        csv.row([
            row.label.clone(),
            float(row.mean),
            float(row.hdi_lower),
            float(row.hdi_upper),
            float(row.nonzero_probability),
        ])?;
    }
    csv.finish()
}

/// Coefficient summary as an aligned three-decimal text table.
pub fn summary_text(table: &SummaryTable) -> String {
    let mut rows: Vec<[String; 5]> =
        vec![SUMMARY_HEADER.map(|h| h.to_string())];
    for row in &table.rows {
        rows.push([
            row.label.clone(),
            fixed3(row.mean),
            fixed3(row.hdi_lower),
            fixed3(row.hdi_upper),
            fixed3(row.nonzero_probability),
        ]);
    }
    aligned_table(&rows)
}

fn aligned_table(rows: &[[String; 5]]) -> String {
    let mut widths = [0usize; 5];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for (r, row) in rows.iter().enumerate() {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i == 0 {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            } else {
                line.push_str(&format!("  {cell:>width$}", width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if r == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

/// Variance summary as CSV.
pub fn variances_csv(rows: &[VarianceSummary]) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["Variance", "Mean", "2.5%", "97.5%"])?;
    for row in rows {
        csv.row([
            row.label.clone(),
            float(row.mean),
            float(row.hdi_lower),
            float(row.hdi_upper),
        ])?;
    }
    csv.finish()
}

/// One-step-ahead forecast alongside the observed values.
pub fn forecast_csv(
    dates: &[NaiveDate],
    observed: &[Option<f64>],
    mean: &[f64],
    variance: &[f64],
) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["date", "actual", "predicted_mean", "predicted_variance"])?;
    for t in 0..dates.len() {
        csv.row([
            dates[t].to_string(),
            observed[t].map(float).unwrap_or_default(),
            float(mean[t]),
            float(variance[t]),
        ])?;
    }
    csv.finish()
}

/// The retained draw archive: one row per draw carrying the observation
/// variance, every innovation variance, and each coefficient with its
/// inclusion indicator. State paths are not serialized; they are
/// reproducible bit-for-bit by rerunning the manifest.
pub fn draws_csv(draws: &PosteriorDraws) -> Result<String> {
    let mut csv = Csv::new();
    let mut header = vec!["draw".to_string(), "obs_variance".to_string()];
    for label in &draws.layout.innovation_labels {
        header.push(format!("var_{label}"));
    }
    for label in &draws.layout.static_labels {
        header.push(format!("beta_{label}"));
    }
    for label in &draws.layout.static_labels {
        header.push(format!("gamma_{label}"));
    }
    csv.row(&header)?;

    for d in 0..draws.len() {
        let mut row = vec![d.to_string(), float(draws.obs_variance[d])];
        for i in 0..draws.layout.innovation_dim {
            row.push(float(draws.state_variances[d][i]));
        }
        for j in 0..draws.layout.static_dim {
            row.push(float(draws.coefficients[d][j]));
        }
        for j in 0..draws.layout.static_dim {
            row.push(if draws.inclusion[d][j] { "1" } else { "0" }.to_string());
        }
        csv.row(&row)?;
    }
    csv.finish()
}

/// Rebuilds the coefficient summary from a serialized draw archive, through
/// the same summarization code the fit itself used.
pub fn resummarize_archive(archive_csv: &str) -> Result<SummaryTable> {
    let mut reader = csv::Reader::from_reader(archive_csv.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    let beta_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            h.strip_prefix("beta_").map(|label| (i, label.to_string()))
        })
        .collect();
    let gamma_cols: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.starts_with("gamma_").then_some(i))
        .collect();
    if beta_cols.len() != gamma_cols.len() {
        bail!(
            "archive has {} coefficient columns but {} indicator columns",
            beta_cols.len(),
            gamma_cols.len()
        );
    }

    let labels: Vec<String> = beta_cols.iter().map(|(_, l)| l.clone()).collect();
    let mut coefficients: Vec<Vec<f64>> = Vec::new();
    let mut inclusion: Vec<Vec<bool>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let mut beta = Vec::with_capacity(labels.len());
        for (col, label) in &beta_cols {
            let text = record.get(*col).unwrap_or_default();
            beta.push(text.parse::<f64>().with_context(|| {
                format!("coefficient {label:?} holds {text:?}, not a number")
            })?);
        }
        let mut gamma = Vec::with_capacity(labels.len());
        for col in &gamma_cols {
            gamma.push(record.get(*col) == Some("1"));
        }
        coefficients.push(beta);
        inclusion.push(gamma);
    }

    Ok(summarize_coefficients(&labels, &coefficients, &inclusion)?)
}

/// Per-time-point component decomposition in long, plot-ready form.
pub fn decomposition_csv(dates: &[NaiveDate], decomposition: &Decomposition) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["date", "component", "mean", "lower", "upper"])?;
    let mut write_series = |name: &str, mean: &[f64], lower: &[f64], upper: &[f64]| {
        for t in 0..dates.len() {
            csv.row([
                dates[t].to_string(),
                name.to_string(),
                float(mean[t]),
                float(lower[t]),
                float(upper[t]),
            ])?;
        }
        anyhow::Ok(())
    };
    for component in &decomposition.components {
        write_series(&component.name, &component.mean, &component.lower, &component.upper)?;
    }
    write_series(
        &decomposition.fitted.name,
        &decomposition.fitted.mean,
        &decomposition.fitted.lower,
        &decomposition.fitted.upper,
    )?;
    csv.finish()
}

/// Calibration outcome: per-column initial and calibrated inclusion and the
/// calibrated prior mean.
pub fn calibrated_csv(
    labels: &[String],
    initial: &[CoefPrior],
    outcome: &CalibrationOutcome,
) -> Result<String> {
    let mut csv = Csv::new();
    csv.row([
        "Variable",
        "Initial inclusion",
        "Calibrated inclusion",
        "Calibrated prior mean",
    ])?;
    for (j, label) in labels.iter().enumerate() {
        csv.row([
            label.clone(),
            float(initial[j].inclusion_prob),
            float(outcome.updated.coefficients[j].inclusion_prob),
            float(outcome.updated.coefficients[j].prior_mean),
        ])?;
    }
    csv.finish()
}

/// Per-chain inclusion frequencies and coefficient means.
pub fn per_chain_csv(labels: &[String], outcome: &CalibrationOutcome) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["chain", "seed", "variable", "inclusion_frequency", "coefficient_mean"])?;
    for (chain, seed) in outcome.seeds.iter().enumerate() {
        for (j, label) in labels.iter().enumerate() {
            csv.row([
                chain.to_string(),
                seed.to_string(),
                label.clone(),
                float(outcome.per_chain_inclusion[chain][j]),
                float(outcome.per_chain_coefficient_means[chain][j]),
            ])?;
        }
    }
    csv.finish()
}

/// Pairwise distance matrix with series labels on both axes.
pub fn distances_csv(result: &ClusterResult) -> Result<String> {
    let labels = &result.dendrogram.labels;
    let mut csv = Csv::new();
    let mut header = vec!["series".to_string()];
    header.extend(labels.iter().cloned());
    csv.row(&header)?;
    for (i, label) in labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        for j in 0..labels.len() {
            row.push(float(result.distances[i][j]));
        }
        csv.row(&row)?;
    }
    csv.finish()
}

/// Merge steps of the dendrogram. Nodes 0..n-1 are the input series in
/// order; step i creates node n+i by joining `left` and `right` at the
/// linkage `height`.
pub fn merges_csv(result: &ClusterResult) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["step", "left", "right", "height", "size"])?;
    for (step, merge) in result.dendrogram.merges.iter().enumerate() {
        csv.row([
            step.to_string(),
            merge.left.to_string(),
            merge.right.to_string(),
            float(merge.height),
            merge.size.to_string(),
        ])?;
    }
    csv.finish()
}

/// Flat cluster assignments (only when a cluster count was requested).
pub fn assignments_csv(result: &ClusterResult) -> Result<Option<String>> {
    let Some(assignments) = &result.assignments else {
        return Ok(None);
    };
    let mut csv = Csv::new();
    csv.row(["series", "cluster"])?;
    for (label, cluster) in result.dendrogram.labels.iter().zip(assignments) {
        csv.row([label.clone(), cluster.to_string()])?;
    }
    Ok(Some(csv.finish()?))
}

/// Sample periodogram with the period of each Fourier frequency.
pub fn periodogram_csv(p: &Periodogram) -> Result<String> {
    let mut csv = Csv::new();
    csv.row(["frequency", "period", "power"])?;
    for (f, power) in p.frequencies.iter().zip(&p.powers) {
        csv.row([float(*f), float(1.0 / *f), float(*power)])?;
    }
    csv.finish()
}

/// Standardization constants recorded for de-standardizing reports.
pub fn standardization_details(
    dataset: &Dataset,
    details: &mut serde_json::Map<String, serde_json::Value>,
) {
    details.insert("target_mean".into(), dataset.target_mean.into());
    details.insert("target_sd".into(), dataset.target_sd.into());
}
