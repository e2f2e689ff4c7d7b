//! Time-indexed univariate series with optional missing values.

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling frequency of a series. Timestamps are evenly spaced calendar
/// dates; the frequency fixes the spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frequency {
    Daily,
    Weekly,
}

impl Frequency {
    /// Spacing between consecutive observations, in days.
    pub fn step_days(self) -> i64 {
        match self {
            Frequency::Daily => 1,
            Frequency::Weekly => 7,
        }
    }
}

/// A univariate series observed on an evenly spaced calendar grid.
///
/// Values may be missing (`None`); present values are always finite.
/// Timestamps are strictly increasing by construction: the series stores its
/// start date and frequency, and derives the date of index `t` from them.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: NaiveDate,
    frequency: Frequency,
    values: Vec<Option<f64>>,
}

impl TimeSeries {
    /// Builds a series, checking that it is non-empty and that every present
    /// value is finite.
    pub fn new(start: NaiveDate, frequency: Frequency, values: Vec<Option<f64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("time series must contain at least one point"));
        }
        for (t, v) in values.iter().enumerate() {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(Error::invalid(format!(
                        "non-finite value {x} at index {t}"
                    )));
                }
            }
        }
        Ok(TimeSeries { start, frequency, values })
    }

    /// Convenience constructor for fully observed data on a synthetic daily
    /// grid; handy in tests and simulations where dates are immaterial.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2013, 1, 1).expect("valid date");
        Self::new(start, Frequency::Daily, values.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn value(&self, t: usize) -> Option<f64> {
        self.values.get(t).copied().flatten()
    }

    /// Date of the observation at index `t`.
    pub fn timestamp(&self, t: usize) -> NaiveDate {
        self.start + Duration::days(self.frequency.step_days() * t as i64)
    }

    pub fn timestamps(&self) -> Vec<NaiveDate> {
        (0..self.len()).map(|t| self.timestamp(t)).collect()
    }

    /// Indices with a present value, in order.
    pub fn observed_indices(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(t, v)| v.map(|_| t))
            .collect()
    }

    /// Present values, in time order.
    pub fn observed_values(&self) -> Vec<f64> {
        self.values.iter().filter_map(|v| *v).collect()
    }

    pub fn observed_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Sample variance (divisor n-1) of the observed values; 0.0 when fewer
    /// than two values are present.
    pub fn observed_variance(&self) -> f64 {
        let obs = self.observed_values();
        if obs.len() < 2 {
            return 0.0;
        }
        let mean = obs.iter().sum::<f64>() / obs.len() as f64;
        obs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (obs.len() - 1) as f64
    }

    /// Standardizes the observed values to zero mean and unit sample standard
    /// deviation, leaving the missing pattern intact. Returns the transformed
    /// series together with the original mean and standard deviation.
    pub fn standardized(&self) -> Result<(Self, f64, f64)> {
        let obs = self.observed_values();
        if obs.len() < 2 {
            return Err(Error::invalid(
                "standardization requires at least two observed values",
            ));
        }
        let mean = obs.iter().sum::<f64>() / obs.len() as f64;
        let sd = (obs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / (obs.len() - 1) as f64)
            .sqrt();
        if sd <= 0.0 {
            return Err(Error::invalid("cannot standardize a constant series"));
        }
        let values = self
            .values
            .iter()
            .map(|v| v.map(|x| (x - mean) / sd))
            .collect();
        Ok((
            TimeSeries { start: self.start, frequency: self.frequency, values },
            mean,
            sd,
        ))
    }
}
