//! Posterior summaries: highest-density intervals, coefficient tables, and
//! time-varying coefficient paths.

use crate::components::ComponentGroup;
use crate::error::{Error, Result};
use crate::inference::PosteriorDraws;
use crate::util::{mean, shortest_interval};

/// Credible mass used by the coefficient and variance summary tables.
const SUMMARY_MASS: f64 = 0.95;

/// Highest-density interval: the shortest contiguous window of sorted
/// samples containing at least `ceil(mass * n)` of them, ties broken toward
/// the lowest start. Requires at least 20 samples and `0 < mass < 1`.
pub fn hdi(samples: &[f64], mass: f64) -> Result<(f64, f64)> {
    if samples.len() < 20 {
        return Err(Error::invalid(format!(
            "highest-density interval needs at least 20 samples, got {}",
            samples.len()
        )));
    }
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::invalid(format!(
            "credible mass must lie strictly between 0 and 1, got {mass}"
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(shortest_interval(&sorted, mass))
}

/// Lenient interval for internal summaries that may face tiny subsets:
/// empty input yields the zero interval, one sample a point interval.
fn lenient_interval(samples: &mut Vec<f64>, mass: f64) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    shortest_interval(samples, mass)
}

/// One row of the coefficient summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSummary {
    pub label: String,
    /// Posterior mean over all retained draws, zeros included.
    pub mean: f64,
    /// Bounds of the 95% highest-density interval of the draws in which the
    /// coefficient was included; (0, 0) when it never was.
    pub hdi_lower: f64,
    pub hdi_upper: f64,
    /// Fraction of retained draws including the coefficient.
    pub nonzero_probability: f64,
}

/// Coefficient summary table (one row per static design column).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub rows: Vec<CoefficientSummary>,
    pub mass: f64,
}

/// Builds the coefficient summary: posterior mean with zeros included, a
/// 95% highest-density interval of the slab (included) draws, and the
/// non-zero probability. A never-included coefficient reports all zeros.
pub fn posterior_summary(draws: &PosteriorDraws) -> Result<SummaryTable> {
    let coefficients: Vec<Vec<f64>> = draws
        .coefficients
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();
    summarize_coefficients(&draws.layout.static_labels, &coefficients, &draws.inclusion)
}

/// The coefficient summary computed directly from archived draws: one label
/// per column, one coefficient vector and one indicator vector per retained
/// draw. `posterior_summary` delegates here, so a table rebuilt from a
/// serialized archive is identical to the one built from the live draws.
pub fn summarize_coefficients(
    labels: &[String],
    coefficients: &[Vec<f64>],
    inclusion: &[Vec<bool>],
) -> Result<SummaryTable> {
    if coefficients.is_empty() {
        return Err(Error::invalid("no retained draws to summarize"));
    }
    if coefficients.len() != inclusion.len() {
        return Err(Error::invalid(format!(
            "{} coefficient draws but {} indicator draws",
            coefficients.len(),
            inclusion.len()
        )));
    }
    let k = labels.len();
    for (d, (b, g)) in coefficients.iter().zip(inclusion).enumerate() {
        if b.len() != k || g.len() != k {
            return Err(Error::invalid(format!(
                "draw {d} has {} coefficients and {} indicators for {k} labels",
                b.len(),
                g.len()
            )));
        }
    }
    let n = coefficients.len() as f64;
    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let mut total = 0.0;
        let mut included = Vec::new();
        for d in 0..coefficients.len() {
            let b = coefficients[d][j];
            total += b;
            if inclusion[d][j] {
                included.push(b);
            }
        }
        let nonzero = included.len() as f64 / n;
        let (lo, hi) = lenient_interval(&mut included, SUMMARY_MASS);
        rows.push(CoefficientSummary {
            label: labels[j].clone(),
            mean: total / n,
            hdi_lower: lo,
            hdi_upper: hi,
            nonzero_probability: nonzero,
        });
    }
    Ok(SummaryTable { rows, mass: SUMMARY_MASS })
}

/// Summary row for one variance parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSummary {
    pub label: String,
    pub mean: f64,
    pub hdi_lower: f64,
    pub hdi_upper: f64,
}

/// Posterior means and 95% intervals for the observation variance and every
/// innovation variance, in layout order.
pub fn variance_summary(draws: &PosteriorDraws) -> Result<Vec<VarianceSummary>> {
    if draws.is_empty() {
        return Err(Error::invalid("no retained draws to summarize"));
    }
    let mut out = Vec::with_capacity(1 + draws.layout.innovation_dim);
    let mut obs = draws.obs_variance.clone();
    let (lo, hi) = lenient_interval(&mut obs, SUMMARY_MASS);
    out.push(VarianceSummary {
        label: "observation".to_string(),
        mean: mean(&draws.obs_variance),
        hdi_lower: lo,
        hdi_upper: hi,
    });
    for i in 0..draws.layout.innovation_dim {
        let mut samples: Vec<f64> =
            draws.state_variances.iter().map(|q| q[i]).collect();
        let m = mean(&samples);
        let (lo, hi) = lenient_interval(&mut samples, SUMMARY_MASS);
        out.push(VarianceSummary {
            label: draws.layout.innovation_labels[i].clone(),
            mean: m,
            hdi_lower: lo,
            hdi_upper: hi,
        });
    }
    Ok(out)
}

/// Posterior path of one time-varying coefficient.
#[derive(Debug, Clone)]
pub struct CoefficientPath {
    pub label: String,
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Extracts the posterior mean and 95% band of the random-walk coefficient
/// for a dynamic column (a dynamic-regression column or a dynamic
/// intervention), identified by label.
pub fn dynamic_coefficient_paths(
    draws: &PosteriorDraws,
    column: &str,
) -> Result<CoefficientPath> {
    if draws.is_empty() {
        return Err(Error::invalid("no retained draws to summarize"));
    }
    let state_index = draws
        .layout
        .entries
        .iter()
        .filter(|e| {
            !e.states.is_empty()
                && matches!(
                    e.group,
                    ComponentGroup::DynamicRegression | ComponentGroup::Intervention
                )
        })
        .find_map(|e| {
            e.column_labels
                .iter()
                .position(|l| l == column)
                .map(|pos| e.states.start + pos)
        })
        .ok_or_else(|| {
            Error::invalid(format!("column '{column}' is not a dynamic coefficient"))
        })?;

    let n = draws.states[0].nrows();
    let mut path = CoefficientPath {
        label: column.to_string(),
        mean: Vec::with_capacity(n),
        lower: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
    };
    let mut samples = vec![0.0; draws.len()];
    for t in 0..n {
        for (d, states) in draws.states.iter().enumerate() {
            samples[d] = states[(t, state_index)];
        }
        path.mean.push(mean(&samples));
        let mut buf = samples.clone();
        buf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (lo, hi) = shortest_interval(&buf, SUMMARY_MASS);
        path.lower.push(lo);
        path.upper.push(hi);
    }
    Ok(path)
}
