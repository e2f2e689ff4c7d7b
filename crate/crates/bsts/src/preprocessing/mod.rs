//! Series preprocessing: standardization, spectral inspection, and
//! shape-based clustering of trends.

mod cluster;
mod dtw;

pub use cluster::{
    cluster_trends, cluster_trends_with, ClusterResult, Dendrogram, Linkage, Merge,
};
pub use dtw::dtw_distance;

use crate::error::{Error, Result};

/// A standardized series together with the moments needed to undo the
/// transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedSeries {
    pub values: Vec<f64>,
    pub original_mean: f64,
    pub original_sd: f64,
}

impl StandardizedSeries {
    /// Inverse transformation: `x * sd + mean`.
    pub fn destandardize(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|x| x * self.original_sd + self.original_mean)
            .collect()
    }
}

/// Standardizes to zero mean and unit sample standard deviation
/// (divisor n-1). Errors on fewer than two values, non-finite input, or a
/// constant series.
pub fn standardize(values: &[f64]) -> Result<StandardizedSeries> {
    if values.len() < 2 {
        return Err(Error::invalid(
            "standardization requires at least two values",
        ));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite value"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd <= 0.0 {
        return Err(Error::invalid("cannot standardize a constant series"));
    }
    Ok(StandardizedSeries {
        values: values.iter().map(|x| (x - mean) / sd).collect(),
        original_mean: mean,
        original_sd: sd,
    })
}

/// Periodogram of a series at the Fourier frequencies `j/n`,
/// `j = 1..floor(n/2)`, computed after mean removal with the normalization
/// `power_j = |DFT_j|^2 / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    /// Frequencies in cycles per sampling interval.
    pub frequencies: Vec<f64>,
    pub powers: Vec<f64>,
    /// `n / j*` for the highest-power bin `j*` (ties resolved toward the
    /// lowest frequency).
    pub dominant_period: f64,
}

impl Periodogram {
    pub fn dominant_frequency(&self) -> f64 {
        1.0 / self.dominant_period
    }
}

/// Computes the periodogram. Requires at least 8 points and a fully
/// observed, finite series (impute or trim beforehand).
pub fn periodogram(values: &[f64]) -> Result<Periodogram> {
    let n = values.len();
    if n < 8 {
        return Err(Error::invalid(format!(
            "periodogram requires at least 8 points, got {n}"
        )));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite value"));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|x| x - mean).collect();

    let half = n / 2;
    let mut frequencies = Vec::with_capacity(half);
    let mut powers = Vec::with_capacity(half);
    let step = -2.0 * std::f64::consts::PI / n as f64;
    for j in 1..=half {
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, x) in centered.iter().enumerate() {
            let angle = step * (j as f64) * (t as f64);
            re += x * angle.cos();
            im += x * angle.sin();
        }
        frequencies.push(j as f64 / n as f64);
        powers.push((re * re + im * im) / n as f64);
    }

    let mut best = 0;
    for (j, p) in powers.iter().enumerate() {
        if *p > powers[best] {
            best = j;
        }
    }
    let dominant_period = n as f64 / (best + 1) as f64;
    Ok(Periodogram { frequencies, powers, dominant_period })
}
