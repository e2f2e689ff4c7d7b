//! Command-line front end for the `bsts` library: JSON run configurations,
//! CSV ingestion, and the fit / calibrate / compare / decompose / cluster /
//! periodogram subcommands, each writing plot-ready CSVs plus a manifest
//! that reproduces the run bit-for-bit.

pub mod commands;
pub mod config;
pub mod ingest;
pub mod report;
