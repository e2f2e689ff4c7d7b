//! Forecast-accuracy metrics and a harness that scores several model
//! specifications on the same series.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::components::{assemble, ComponentSpec};
use crate::error::{Error, Result};
use crate::inference::{one_step_ahead, run_gibbs, McmcConfig, OsaMethod, Priors};
use crate::series::TimeSeries;

fn check_pairs(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} actual vs {} predicted",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.is_empty() {
        return Err(Error::invalid("metrics require at least one pair"));
    }
    if actual.iter().chain(predicted.iter()).any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite value"));
    }
    Ok(())
}

/// Symmetric mean absolute percentage error, in percent:
/// `(100/n) Σ |ŷ−y| / ((|y|+|ŷ|)/2)`. Always in `[0, 200]`. Errors when any
/// pair has `|y| + |ŷ| = 0`, which leaves its term undefined.
pub fn smape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_pairs(actual, predicted)?;
    let mut total = 0.0;
    for (y, yhat) in actual.iter().zip(predicted) {
        let denominator = (y.abs() + yhat.abs()) / 2.0;
        if denominator == 0.0 {
            return Err(Error::invalid(
                "smape is undefined when actual and predicted are both zero",
            ));
        }
        total += (yhat - y).abs() / denominator;
    }
    Ok(100.0 * total / actual.len() as f64)
}

/// Mean absolute error `Σ|e_i|/n`.
pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_pairs(actual, predicted)?;
    let total: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(y, yhat)| (yhat - y).abs())
        .sum();
    Ok(total / actual.len() as f64)
}

/// Mean squared error `Σ(e_i)²/n`.
pub fn mse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_pairs(actual, predicted)?;
    let total: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(y, yhat)| (yhat - y) * (yhat - y))
        .sum();
    Ok(total / actual.len() as f64)
}

/// A labeled model specification for comparison runs.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub label: String,
    pub components: Vec<ComponentSpec>,
}

impl ModelSpec {
    pub fn new(label: impl Into<String>, components: Vec<ComponentSpec>) -> Self {
        Self { label: label.into(), components }
    }
}

/// The six canonical specifications compared in the accuracy study, in the
/// canonical order: local level (LL), local level with time-invariant
/// regressors (LLTI), local level with time-varying regressors (LLTV),
/// local linear trend (LLT), and the trend variants with each regression
/// type (LLTTI, LLTTV). `design` is the n-by-k regressor matrix shared by
/// the regression variants.
pub fn canonical_specs(design: &DMatrix<f64>, names: &[String]) -> Result<Vec<ModelSpec>> {
    if design.ncols() == 0 {
        return Err(Error::invalid(
            "the canonical comparison needs at least one regressor",
        ));
    }
    if names.len() != design.ncols() {
        return Err(Error::invalid(format!(
            "{} regressor names for {} design columns",
            names.len(),
            design.ncols()
        )));
    }
    let static_reg = || {
        ComponentSpec::static_regression_labeled(design.clone(), names.to_vec())
    };
    let dynamic_reg = || {
        ComponentSpec::dynamic_regression_labeled(design.clone(), names.to_vec())
    };
    Ok(vec![
        ModelSpec::new("LL", vec![ComponentSpec::local_level()]),
        ModelSpec::new("LLTI", vec![ComponentSpec::local_level(), static_reg()]),
        ModelSpec::new("LLTV", vec![ComponentSpec::local_level(), dynamic_reg()]),
        ModelSpec::new("LLT", vec![ComponentSpec::local_linear_trend()]),
        ModelSpec::new("LLTTI", vec![ComponentSpec::local_linear_trend(), static_reg()]),
        ModelSpec::new("LLTTV", vec![ComponentSpec::local_linear_trend(), dynamic_reg()]),
    ])
}

/// Accuracy numbers for one specification, or the reason it could not be
/// scored.
#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    Scored { smape: f64, mae: f64, mse: f64 },
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub label: String,
    pub outcome: RowOutcome,
}

/// One row per compared specification, in request order. Failed fits keep
/// their row (flagged with the failure) so the report always covers every
/// requested model.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub rows: Vec<AccuracyRow>,
    /// Number of initial time points excluded from scoring while the
    /// filters recover from their diffuse initialization.
    pub warmup: usize,
}

impl AccuracyReport {
    /// CSV with full-precision values: `model,smape,mae,mse,note`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,smape,mae,mse,note\n");
        for row in &self.rows {
            match &row.outcome {
                RowOutcome::Scored { smape, mae, mse } => {
                    out.push_str(&format!("{},{},{},{},\n", row.label, smape, mae, mse));
                }
                RowOutcome::Failed { message } => {
                    let quoted = message.replace('"', "\"\"");
                    out.push_str(&format!("{},,,,\"{quoted}\"\n", row.label));
                }
            }
        }
        out
    }

    /// Aligned text table (three decimals), columns Model | sMAPE | MAE | MSE.
    pub fn to_table(&self) -> String {
        let mut cells: Vec<[String; 4]> = vec![[
            "Model".into(),
            "sMAPE".into(),
            "MAE".into(),
            "MSE".into(),
        ]];
        for row in &self.rows {
            let entry = match &row.outcome {
                RowOutcome::Scored { smape, mae, mse } => [
                    row.label.clone(),
                    format!("{smape:.3}"),
                    format!("{mae:.3}"),
                    format!("{mse:.3}"),
                ],
                RowOutcome::Failed { message } => [
                    row.label.clone(),
                    format!("failed: {message}"),
                    String::new(),
                    String::new(),
                ],
            };
            cells.push(entry);
        }
        let widths: Vec<usize> = (0..4)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap())
            .collect();
        let mut out = String::new();
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
            if i == 0 {
                let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }
}

/// Fits every specification on `data` and scores its one-step-ahead
/// predictions (posterior means of the predictive distribution) against the
/// observed values with sMAPE, MAE, and MSE.
///
/// All specifications are scored on the identical set of time points: the
/// observed points after a common warmup equal to the largest state
/// dimension among the compared models, so that no model is penalized for
/// its diffuse initialization. Fits run in parallel; a specification that
/// fails keeps its row, flagged with the failure message.
pub fn compare_models(
    data: &TimeSeries,
    specs: &[ModelSpec],
    config: &McmcConfig,
    method: OsaMethod,
) -> Result<AccuracyReport> {
    if specs.is_empty() {
        return Err(Error::invalid("no specifications to compare"));
    }
    for spec in specs {
        if specs.iter().filter(|s| s.label == spec.label).count() > 1 {
            return Err(Error::invalid(format!(
                "duplicate specification label {:?}",
                spec.label
            )));
        }
    }

    let n = data.len();
    let assembled: Vec<std::result::Result<_, Error>> = specs
        .iter()
        .map(|spec| assemble(&spec.components, n))
        .collect();
    let warmup = assembled
        .iter()
        .filter_map(|model| model.as_ref().ok().map(|m| m.layout.state_dim))
        .max()
        .unwrap_or(0);
    let scored: Vec<(usize, f64)> = data
        .observed_indices()
        .into_iter()
        .filter(|t| *t >= warmup)
        .map(|t| (t, data.value(t).unwrap()))
        .collect();
    if scored.is_empty() {
        return Err(Error::invalid(format!(
            "no observed points remain after the {warmup}-point warmup",
        )));
    }
    let actual: Vec<f64> = scored.iter().map(|(_, y)| *y).collect();

    let priors = Priors::default();
    let rows: Vec<AccuracyRow> = specs
        .par_iter()
        .zip(assembled)
        .map(|(spec, model)| {
            let outcome = model
                .and_then(|model| {
                    let draws = run_gibbs(&model, data, &priors, config)?;
                    let forecast = one_step_ahead(&model, data, &draws, method)?;
                    let predicted: Vec<f64> =
                        scored.iter().map(|(t, _)| forecast.mean[*t]).collect();
                    Ok(RowOutcome::Scored {
                        smape: smape(&actual, &predicted)?,
                        mae: mae(&actual, &predicted)?,
                        mse: mse(&actual, &predicted)?,
                    })
                })
                .unwrap_or_else(|e| RowOutcome::Failed { message: e.to_string() });
            AccuracyRow { label: spec.label.clone(), outcome }
        })
        .collect();
    Ok(AccuracyReport { rows, warmup })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smape_matches_hand_evaluation() {
        let value = smape(&[100.0, 200.0], &[110.0, 190.0]).unwrap();
        let expected = (100.0 / 2.0) * (10.0 / 105.0 + 10.0 / 195.0);
        assert!((value - expected).abs() < 1e-12);
    }

    #[test]
    fn smape_bounds_and_errors() {
        assert_eq!(smape(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 0.0);
        assert!((smape(&[1.0], &[-1.0]).unwrap() - 200.0).abs() < 1e-12);
        assert!(smape(&[0.0], &[0.0]).is_err());
        assert!(smape(&[1.0], &[1.0, 2.0]).is_err());
        assert!(smape(&[], &[]).is_err());
    }

    #[test]
    fn mae_and_mse_match_definitions() {
        let actual = [0.0, 0.0, 0.0];
        let predicted = [1.0, -1.0, 2.0];
        assert!((mae(&actual, &predicted).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((mse(&actual, &predicted).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(mae(&[-5.0], &[0.0]).unwrap(), 5.0);
        assert_eq!(mae(&[7.0, 8.0], &[7.0, 8.0]).unwrap(), 0.0);
    }

    #[test]
    fn metric_scale_behavior() {
        let y = [2.0, 5.0, 9.0];
        let yhat = [2.5, 4.0, 9.5];
        let c = -3.0;
        let cy: Vec<f64> = y.iter().map(|v| c * v).collect();
        let cyhat: Vec<f64> = yhat.iter().map(|v| c * v).collect();
        let mae_scaled = mae(&cy, &cyhat).unwrap();
        assert!((mae_scaled - c.abs() * mae(&y, &yhat).unwrap()).abs() < 1e-12);
        let mse_scaled = mse(&cy, &cyhat).unwrap();
        assert!((mse_scaled - c * c * mse(&y, &yhat).unwrap()).abs() < 1e-12);
        // sMAPE is invariant to a positive common scaling.
        let pos: Vec<f64> = y.iter().map(|v| 10.0 * v).collect();
        let pos_hat: Vec<f64> = yhat.iter().map(|v| 10.0 * v).collect();
        let s1 = smape(&y, &yhat).unwrap();
        let s2 = smape(&pos, &pos_hat).unwrap();
        assert!((s1 - s2).abs() < 1e-12);
    }

    #[test]
    fn metrics_are_permutation_invariant() {
        let y = [1.0, 2.0, 3.0, 4.0];
        let yhat = [1.5, 1.5, 3.5, 3.0];
        let perm = [2usize, 0, 3, 1];
        let py: Vec<f64> = perm.iter().map(|i| y[*i]).collect();
        let pyhat: Vec<f64> = perm.iter().map(|i| yhat[*i]).collect();
        assert!((smape(&y, &yhat).unwrap() - smape(&py, &pyhat).unwrap()).abs() < 1e-12);
        assert!((mae(&y, &yhat).unwrap() - mae(&py, &pyhat).unwrap()).abs() < 1e-12);
        assert!((mse(&y, &yhat).unwrap() - mse(&py, &pyhat).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn canonical_specs_have_the_six_labels_in_order() {
        let design = DMatrix::from_element(30, 2, 0.5);
        let names = vec!["a".to_string(), "b".to_string()];
        let specs = canonical_specs(&design, &names).unwrap();
        let labels: Vec<&str> = specs.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["LL", "LLTI", "LLTV", "LLT", "LLTTI", "LLTTV"]);
        assert!(canonical_specs(&design, &names[..1].to_vec()).is_err());
    }

    #[test]
    fn report_formats_cover_failures() {
        let report = AccuracyReport {
            rows: vec![
                AccuracyRow {
                    label: "LL".into(),
                    outcome: RowOutcome::Scored { smape: 1.23456, mae: 0.5, mse: 0.25 },
                },
                AccuracyRow {
                    label: "LLT".into(),
                    outcome: RowOutcome::Failed { message: "bad input".into() },
                },
            ],
            warmup: 2,
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("model,smape,mae,mse,note\n"));
        assert!(csv.contains("LL,1.23456,0.5,0.25,\n"));
        assert!(csv.contains("LLT,,,,\"bad input\"\n"));
        let table = report.to_table();
        assert!(table.contains("Model"));
        assert!(table.contains("1.235"));
        assert!(table.contains("failed: bad input"));
    }
}
