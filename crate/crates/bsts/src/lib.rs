//! Bayesian structural time series.
//!
//! This crate assembles additive Gaussian state-space models — level,
//! trend, seasonal cycles, interventions, and static or time-varying
//! regression effects — and fits them by Gibbs sampling with spike-and-slab
//! variable selection. The fitted posterior supports one-step-ahead
//! forecasts, decomposition of the fit into per-component series, and
//! summary tables of which drivers matter and by how much.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`components::assemble`] turns a list of [`components::ComponentSpec`]
//!    values into a single state-space model with a bookkeeping
//!    [`components::ModelLayout`].
//! 2. [`inference::run_gibbs`] draws from the joint posterior over states,
//!    variances, coefficients, and inclusion indicators;
//!    [`inference::multi_seed_calibrate`] repeats that across seeds to
//!    calibrate inclusion priors.
//! 3. [`inference::posterior_summary`], [`components::decompose`],
//!    [`inference::one_step_ahead`], and [`evaluation::compare_models`]
//!    turn retained draws into tables, component series, forecasts, and
//!    accuracy reports.
//!
//! Supporting tools live in [`preprocessing`] (standardization,
//! periodograms, and DTW-based clustering of driver series) and
//! [`evaluation`] (sMAPE/MAE/MSE). Everything downstream of a seed is
//! deterministic: rerunning any fit with the same inputs reproduces every
//! draw bitwise.

pub mod components;
pub mod error;
pub mod evaluation;
pub mod inference;
pub mod preprocessing;
pub mod series;
pub mod ssm;
pub mod synthetic;
mod util;

pub use error::{Error, Result};
pub use series::{Frequency, TimeSeries};
