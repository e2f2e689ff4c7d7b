//! End-to-end acceptance gate for the command-line front end, continuing
//! the library's numbered criteria: subcommand determinism from manifests
//! (11) and the full multi-chain calibration protocol inside its time
//! budget (12). Each test is one criterion; the test name is the pass/fail
//! line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

const BIN: &str = env!("CARGO_BIN_EXE_bsts");

/// Wall-clock budget for the full calibration protocol.
const PROTOCOL_BUDGET_SECS: f64 = 900.0;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Runs the binary, panicking with its stderr on a nonzero exit.
fn run_ok(args: &[&str]) {
    let output = Command::new(BIN)
        .args(args)
        .output()
        .expect("the bsts binary runs");
    assert!(
        output.status.success(),
        "bsts {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
}

/// A quick configuration over the committed panel, exercising every
/// component kind the subcommands consume: level, a dated level-shift
/// intervention, and static regression over six drivers, with clustering
/// enabled.
fn quick_config(dir: &Path) -> PathBuf {
    let config = serde_json::json!({
        "data": fixtures_dir().join("panel.csv"),
        "target": "target",
        "regressors": [
            "driver_01", "driver_04", "driver_08",
            "driver_13", "driver_17", "driver_02"
        ],
        "frequency": "weekly",
        "standardize": true,
        "components": [
            { "type": "local_level" },
            {
                "type": "intervention",
                "kind": "level_shift",
                "onset_date": "2014-06-08",
                "dynamic": false
            },
            { "type": "static_regression" }
        ],
        "mcmc": { "iterations": 150, "burn_in": 50, "thin": 2, "seed": 99 },
        "calibration": { "chains": 3, "update_means": false },
        "clusters": 2
    });
    let path = dir.join("quick-config.json");
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

fn sorted_entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("cannot list {}: {e}", dir.display()))
        .map(|entry| entry.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

fn assert_dirs_byte_identical(first: &Path, second: &Path, context: &str) {
    let names = sorted_entries(first);
    assert_eq!(
        names,
        sorted_entries(second),
        "{context}: the rerun produced a different file set"
    );
    for name in &names {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert!(
            a == b,
            "{context}: {name} differs between the run and its manifest rerun"
        );
    }
}

/// Criterion 11 — determinism. Every subcommand, run once from a
/// configuration file and again from the manifest the first run wrote,
/// must produce byte-identical output directories (the manifest itself
/// included).
#[test]
fn criterion_11_manifest_reruns_are_byte_identical() {
    let temp = tempfile::tempdir().unwrap();
    let config = quick_config(temp.path());
    let config = config.to_str().unwrap();

    for subcommand in
        ["fit", "calibrate", "compare", "decompose", "cluster", "periodogram"]
    {
        let first = temp.path().join(format!("{subcommand}-first"));
        let second = temp.path().join(format!("{subcommand}-second"));
        run_ok(&[
            subcommand,
            "--config",
            config,
            "--output",
            first.to_str().unwrap(),
            "--quiet",
        ]);
        let manifest = first.join("manifest.json");
        run_ok(&[
            subcommand,
            "--config",
            manifest.to_str().unwrap(),
            "--output",
            second.to_str().unwrap(),
            "--quiet",
        ]);
        assert_dirs_byte_identical(&first, &second, subcommand);
    }
}

/// Criterion 12 — the full calibration protocol. The committed
/// configuration (30 chains of 3000 iterations, burn-in 981, prior
/// inclusion probability 0.5) must run end-to-end on the bundled panel
/// (230 weekly points, 20 drivers) in under 15 minutes, emitting the
/// coefficient summary with the exact reporting header.
#[test]
fn criterion_12_full_calibration_protocol_fits_the_budget() {
    let temp = tempfile::tempdir().unwrap();
    let out = temp.path().join("protocol");
    let config = fixtures_dir().join("config.json");

    let started = Instant::now();
    run_ok(&[
        "calibrate",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < PROTOCOL_BUDGET_SECS,
        "protocol took {elapsed:.1} s, the budget is {PROTOCOL_BUDGET_SECS} s"
    );

    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next(),
        Some("Variable,Mean,2.5%,97.5%,Non-zero probability"),
        "summary header is not the reporting format"
    );
    assert_eq!(lines.count(), 20, "one summary row per driver");

    let per_chain = fs::read_to_string(out.join("per_chain.csv")).unwrap();
    assert_eq!(
        per_chain.lines().count(),
        1 + 30 * 20,
        "per-chain table covers 30 chains x 20 drivers"
    );

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["details"]["chain_seeds"].as_array().unwrap().len(), 30);
}

/// The fit summary must be reproducible from the serialized draw archive
/// alone: re-summarizing draws.csv yields the written summary.csv
/// byte-for-byte.
#[test]
fn fit_summary_rebuilds_identically_from_the_draw_archive() {
    let temp = tempfile::tempdir().unwrap();
    let config = quick_config(temp.path());
    let out = temp.path().join("fit");
    run_ok(&[
        "fit",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--quiet",
    ]);

    let archive = fs::read_to_string(out.join("draws.csv")).unwrap();
    let rebuilt = bsts_cli::report::resummarize_archive(&archive).unwrap();
    let written = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(
        bsts_cli::report::summary_csv(&rebuilt).unwrap(),
        written,
        "archive re-summarization drifted from the written summary"
    );
}

/// Failures surface as a nonzero exit with a diagnostic on stderr.
#[test]
fn failures_exit_nonzero_with_a_diagnostic() {
    let output = Command::new(BIN)
        .args(["fit", "--config", "/nonexistent/config.json"])
        .output()
        .expect("the bsts binary runs");
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("bsts fit"), "diagnostic names the subcommand: {stderr}");
    assert!(stderr.contains("/nonexistent/config.json"), "diagnostic names the path: {stderr}");
}
