//! CSV ingestion: dated rows to a validated time series plus regressor
//! design, with standardization applied per the run configuration.

use anyhow::{bail, Context, Result};
use bsts::preprocessing::standardize;
use bsts::TimeSeries;
use chrono::NaiveDate;
use nalgebra::DMatrix;

use crate::config::RunConfig;

/// The loaded and validated dataset: the (possibly standardized) target
/// series, the regressor design in configuration order, the raw regressor
/// columns for shape-based clustering, and the date grid.
#[derive(Debug)]
pub struct Dataset {
    pub series: TimeSeries,
    /// Mean and standard deviation removed from the target (0 and 1 when
    /// standardization is off).
    pub target_mean: f64,
    pub target_sd: f64,
    /// `n x k` design matrix over the configured regressor columns.
    pub design: DMatrix<f64>,
    pub labels: Vec<String>,
    /// Unstandardized regressor columns, in configuration order.
    pub raw_regressors: Vec<Vec<f64>>,
    pub dates: Vec<NaiveDate>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.series.len()
    }
}

/// Reads the configured CSV file. The first column must hold ISO-8601 dates
/// on the configured frequency grid; the target column may have empty cells
/// (missing observations); regressor columns must be complete.
pub fn load(config: &RunConfig) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(&config.data)
        .with_context(|| format!("cannot open {}", config.data.display()))?;

    let headers: Vec<String> =
        reader.headers().context("missing header row")?.iter().map(String::from).collect();
    if headers.len() < 2 {
        bail!("the data file needs a date column and at least one value column");
    }
    for (i, name) in headers.iter().enumerate() {
        if headers.iter().skip(i + 1).any(|other| other == name) {
            bail!("duplicate column {name:?} in the header row");
        }
    }

    let column_index = |name: &str| -> Result<usize> {
        match headers.iter().position(|h| h == name) {
            Some(0) => bail!(
                "column {name:?} is the date column and cannot be used as data"
            ),
            Some(i) => Ok(i),
            None => bail!(
                "column {name:?} not found; the file has {:?}",
                headers
            ),
        }
    };
    let target_col = column_index(&config.target)
        .with_context(|| format!("target column {:?}", config.target))?;
    let regressor_cols: Vec<usize> = config
        .regressors
        .iter()
        .map(|name| {
            column_index(name).with_context(|| format!("regressor column {name:?}"))
        })
        .collect::<Result<_>>()?;

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut target: Vec<Option<f64>> = Vec::new();
    let mut raw_regressors: Vec<Vec<f64>> = vec![Vec::new(); regressor_cols.len()];

    let step = chrono::Duration::days(config.frequency.step_days());
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1; // 1-based data row for diagnostics
        let record = record.with_context(|| format!("row {row}: unreadable record"))?;
        if record.len() != headers.len() {
            bail!(
                "row {row}: {} fields where the header has {}",
                record.len(),
                headers.len()
            );
        }

        let date_text = record.get(0).unwrap_or_default();
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d").with_context(|| {
            format!("row {row}: {date_text:?} is not an ISO-8601 date (YYYY-MM-DD)")
        })?;
        if let Some(previous) = dates.last() {
            let expected = *previous + step;
            if date != expected {
                bail!(
                    "row {row}: date {date} breaks the {:?} grid (expected {expected})",
                    config.frequency
                );
            }
        }
        dates.push(date);

        let target_text = record.get(target_col).unwrap_or_default();
        if target_text.is_empty() {
            target.push(None);
        } else {
            let value: f64 = target_text.parse().with_context(|| {
                format!(
                    "row {row}: target column {:?} holds {target_text:?}, not a number",
                    config.target
                )
            })?;
            target.push(Some(value));
        }

        for (slot, &col) in regressor_cols.iter().enumerate() {
            let name = &config.regressors[slot];
            let text = record.get(col).unwrap_or_default();
            if text.is_empty() {
                bail!(
                    "row {row}: regressor column {name:?} has a missing value; \
                     regressors must be complete"
                );
            }
            let value: f64 = text.parse().with_context(|| {
                format!("row {row}: regressor column {name:?} holds {text:?}, not a number")
            })?;
            raw_regressors[slot].push(value);
        }
    }

    if dates.is_empty() {
        bail!("the data file has a header but no rows");
    }

    let mut series = TimeSeries::new(dates[0], config.frequency, target)
        .context("target column is not a valid series")?;
    let (mut target_mean, mut target_sd) = (0.0, 1.0);
    if config.standardize {
        let (standardized, mean, sd) = series
            .standardized()
            .context("cannot standardize the target column")?;
        series = standardized;
        target_mean = mean;
        target_sd = sd;
    }

    let n = dates.len();
    let k = regressor_cols.len();
    let mut design = DMatrix::zeros(n, k);
    for (j, column) in raw_regressors.iter().enumerate() {
        if config.standardize {
            let standardized = standardize(column).with_context(|| {
                format!(
                    "cannot standardize regressor column {:?}",
                    config.regressors[j]
                )
            })?;
            for t in 0..n {
                design[(t, j)] = standardized.values[t];
            }
        } else {
            for t in 0..n {
                design[(t, j)] = column[t];
            }
        }
    }

    Ok(Dataset {
        series,
        target_mean,
        target_sd,
        design,
        labels: config.regressors.clone(),
        raw_regressors,
        dates,
    })
}
