//! Structural components and their assembly into one state-space model.
//!
//! A model is a list of additive components. Each component contributes a
//! block to the state vector (level/trend/seasonal/time-varying
//! coefficients) or a set of columns to the static regression design, which
//! is kept outside the state vector and sampled by spike-and-slab selection.

mod decompose;

pub use decompose::{decompose, ComponentSeries, Decomposition};

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::{Deserialize, Serialize};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::inference::{CoefPrior, InverseGammaPrior, SpikeSlabPrior};
use crate::ssm::{GaussianState, ObsMap, SystemMatrices, DIFFUSE_SCALE};

/// Deterministic intervention shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterventionKind {
    /// One-period impulse at the onset.
    Pulse,
    /// Permanent step from the onset onward.
    LevelShift,
    /// Ramp accumulating by one per period from the onset onward.
    SlopeShift,
}

impl InterventionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InterventionKind::Pulse => "pulse",
            InterventionKind::LevelShift => "level_shift",
            InterventionKind::SlopeShift => "slope_shift",
        }
    }
}

/// Builds the deterministic regressor for an intervention. `onset` is the
/// 1-based index of the first affected period and must lie within `1..=n`.
pub fn intervention_design(kind: InterventionKind, onset: usize, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("intervention design needs a positive length"));
    }
    if onset == 0 || onset > n {
        return Err(Error::invalid(format!(
            "intervention onset {onset} outside the sample 1..={n}"
        )));
    }
    let onset0 = onset - 1;
    Ok((0..n)
        .map(|t| match kind {
            InterventionKind::Pulse => {
                if t == onset0 {
                    1.0
                } else {
                    0.0
                }
            }
            InterventionKind::LevelShift => {
                if t >= onset0 {
                    1.0
                } else {
                    0.0
                }
            }
            InterventionKind::SlopeShift => {
                if t >= onset0 {
                    (t - onset0 + 1) as f64
                } else {
                    0.0
                }
            }
        })
        .collect())
}

/// One additive component of a structural model. Variance priors left as
/// `None` default to the weakly informative prior derived from the data at
/// fit time.
#[derive(Debug, Clone)]
pub enum ComponentSpec {
    /// Random-walk level (one state).
    LocalLevel { variance_prior: Option<InverseGammaPrior> },
    /// Level plus random-walk slope (two states, two innovations).
    LocalLinearTrend {
        level_prior: Option<InverseGammaPrior>,
        slope_prior: Option<InverseGammaPrior>,
    },
    /// Sum-to-zero dummy seasonality with `period` seasons
    /// (`period - 1` states, one innovation).
    Seasonal {
        period: usize,
        variance_prior: Option<InverseGammaPrior>,
    },
    /// Deterministic intervention regressor. With `dynamic = false` the
    /// coefficient is a static column sampled with the regression block;
    /// with `dynamic = true` it follows a random walk inside the state.
    Intervention {
        kind: InterventionKind,
        onset: usize,
        dynamic: bool,
        coefficient_prior: Option<CoefPrior>,
        variance_prior: Option<InverseGammaPrior>,
    },
    /// Time-invariant regression, kept outside the state vector and sampled
    /// with spike-and-slab selection.
    StaticRegression {
        design: DMatrix<f64>,
        labels: Vec<String>,
        prior: Option<SpikeSlabPrior>,
    },
    /// Random-walk coefficient per column, carried in the state vector with
    /// the regressor values entering the observation row.
    DynamicRegression {
        design: DMatrix<f64>,
        labels: Vec<String>,
        variance_priors: Option<Vec<InverseGammaPrior>>,
    },
}

impl ComponentSpec {
    pub fn local_level() -> Self {
        ComponentSpec::LocalLevel { variance_prior: None }
    }

    pub fn local_linear_trend() -> Self {
        ComponentSpec::LocalLinearTrend { level_prior: None, slope_prior: None }
    }

    pub fn seasonal(period: usize) -> Self {
        ComponentSpec::Seasonal { period, variance_prior: None }
    }

    pub fn intervention(kind: InterventionKind, onset: usize) -> Self {
        ComponentSpec::Intervention {
            kind,
            onset,
            dynamic: false,
            coefficient_prior: None,
            variance_prior: None,
        }
    }

    pub fn dynamic_intervention(kind: InterventionKind, onset: usize) -> Self {
        ComponentSpec::Intervention {
            kind,
            onset,
            dynamic: true,
            coefficient_prior: None,
            variance_prior: None,
        }
    }

    /// Static regression with auto-generated labels `x1..xk`.
    pub fn static_regression(design: DMatrix<f64>) -> Self {
        let labels = (1..=design.ncols()).map(|j| format!("x{j}")).collect();
        ComponentSpec::StaticRegression { design, labels, prior: None }
    }

    pub fn static_regression_labeled(design: DMatrix<f64>, labels: Vec<String>) -> Self {
        ComponentSpec::StaticRegression { design, labels, prior: None }
    }

    /// Dynamic regression with auto-generated labels `x1..xk`.
    pub fn dynamic_regression(design: DMatrix<f64>) -> Self {
        let labels = (1..=design.ncols()).map(|j| format!("x{j}")).collect();
        ComponentSpec::DynamicRegression { design, labels, variance_priors: None }
    }

    pub fn dynamic_regression_labeled(design: DMatrix<f64>, labels: Vec<String>) -> Self {
        ComponentSpec::DynamicRegression { design, labels, variance_priors: None }
    }
}

/// Reporting group of a component, used to aggregate decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentGroup {
    Trend,
    Seasonal,
    Intervention,
    StaticRegression,
    DynamicRegression,
}

impl ComponentGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentGroup::Trend => "trend",
            ComponentGroup::Seasonal => "seasonal",
            ComponentGroup::Intervention => "intervention",
            ComponentGroup::StaticRegression => "static_regression",
            ComponentGroup::DynamicRegression => "dynamic_regression",
        }
    }

    /// Fixed display order for decomposition outputs.
    pub const ORDER: [ComponentGroup; 5] = [
        ComponentGroup::Trend,
        ComponentGroup::Seasonal,
        ComponentGroup::Intervention,
        ComponentGroup::StaticRegression,
        ComponentGroup::DynamicRegression,
    ];
}

/// Where one component lives inside the assembled model: its slice of the
/// state vector, of the innovation vector, and of the static design columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub name: String,
    pub group: ComponentGroup,
    pub states: Range<usize>,
    pub innovations: Range<usize>,
    pub static_cols: Range<usize>,
    /// Column labels for regression-like components; empty otherwise.
    pub column_labels: Vec<String>,
}

/// Complete placement map of an assembled model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelLayout {
    pub entries: Vec<LayoutEntry>,
    pub state_dim: usize,
    pub innovation_dim: usize,
    pub static_dim: usize,
    /// One label per innovation variance, in innovation order.
    pub innovation_labels: Vec<String>,
    /// State row targeted by each innovation (the loading matrix is a 0/1
    /// selector, one state row per innovation).
    pub innovation_rows: Vec<usize>,
    /// One label per static design column, in column order.
    pub static_labels: Vec<String>,
}

/// A fully assembled structural model: system matrices for the state part,
/// the static regression design kept outside the state, and the layout that
/// maps components to state rows, innovations, and design columns.
#[derive(Debug, Clone)]
pub struct AssembledModel {
    pub matrices: SystemMatrices,
    pub layout: ModelLayout,
    /// `n x k` static design (zero columns when the model has no static
    /// regression part).
    pub static_design: DMatrix<f64>,
    pub static_priors: Vec<CoefPrior>,
    /// Per-innovation variance priors; `None` entries resolve to the
    /// weakly informative default at fit time.
    pub innovation_priors: Vec<Option<InverseGammaPrior>>,
    /// Number of time points the model was assembled for.
    pub n: usize,
}

impl AssembledModel {
    /// Approximately diffuse prior for the state at the first observation.
    pub fn default_init(&self) -> GaussianState {
        GaussianState::diffuse(self.layout.state_dim, DIFFUSE_SCALE)
    }

    pub fn init_with_scale(&self, scale: f64) -> GaussianState {
        GaussianState::diffuse(self.layout.state_dim, scale)
    }

    /// Static-regression contribution `x_t' b` at time `t`.
    pub fn static_contribution(&self, beta: &DVector<f64>, t: usize) -> f64 {
        if self.layout.static_dim == 0 {
            0.0
        } else {
            (self.static_design.row(t) * beta)[(0, 0)]
        }
    }
}

struct Builder {
    n: usize,
    entries: Vec<LayoutEntry>,
    t_blocks: Vec<DMatrix<f64>>,
    z_const: Vec<f64>,
    z_dynamic: Vec<(usize, Vec<f64>)>,
    innovation_rows: Vec<usize>,
    innovation_labels: Vec<String>,
    innovation_priors: Vec<Option<InverseGammaPrior>>,
    static_cols: Vec<Vec<f64>>,
    static_labels: Vec<String>,
    static_priors: Vec<CoefPrior>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            n,
            entries: Vec::new(),
            t_blocks: Vec::new(),
            z_const: Vec::new(),
            z_dynamic: Vec::new(),
            innovation_rows: Vec::new(),
            innovation_labels: Vec::new(),
            innovation_priors: Vec::new(),
            static_cols: Vec::new(),
            static_labels: Vec::new(),
            static_priors: Vec::new(),
        }
    }

    fn state_offset(&self) -> usize {
        self.z_const.len()
    }

    fn push_entry(
        &mut self,
        name: String,
        group: ComponentGroup,
        states: Range<usize>,
        innovations: Range<usize>,
        static_cols: Range<usize>,
        column_labels: Vec<String>,
    ) {
        self.entries.push(LayoutEntry { name, group, states, innovations, static_cols, column_labels });
    }

    fn push_innovation(
        &mut self,
        state_row: usize,
        label: String,
        prior: Option<InverseGammaPrior>,
    ) -> usize {
        self.innovation_rows.push(state_row);
        self.innovation_labels.push(label);
        self.innovation_priors.push(prior);
        self.innovation_rows.len() - 1
    }

    fn push_static_column(&mut self, label: String, values: Vec<f64>, prior: CoefPrior) -> usize {
        debug_assert_eq!(values.len(), self.n);
        self.static_cols.push(values);
        self.static_labels.push(label);
        self.static_priors.push(prior);
        self.static_cols.len() - 1
    }
}

fn validate_design(design: &DMatrix<f64>, labels: &[String], n: usize, what: &str) -> Result<()> {
    if design.ncols() == 0 {
        return Err(Error::invalid(format!("{what} design has no columns")));
    }
    if design.nrows() != n {
        return Err(Error::invalid(format!(
            "{what} design has {} rows, series has {n}",
            design.nrows()
        )));
    }
    if design.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what} design contains non-finite values")));
    }
    if labels.len() != design.ncols() {
        return Err(Error::invalid(format!(
            "{what} design has {} columns but {} labels",
            design.ncols(),
            labels.len()
        )));
    }
    Ok(())
}

/// Assembles a list of components into one state-space model over `n` time
/// points. Component blocks are laid out in input order; the transition and
/// loading matrices are block-diagonal over components, so assembling the
/// concatenation of two lists yields the block-diagonal combination of the
/// two assembled models.
pub fn assemble(components: &[ComponentSpec], n: usize) -> Result<AssembledModel> {
    if components.is_empty() {
        return Err(Error::invalid("a model needs at least one component"));
    }
    if n == 0 {
        return Err(Error::invalid("a model needs at least one time point"));
    }

    let trend_count = components
        .iter()
        .filter(|c| {
            matches!(
                c,
                ComponentSpec::LocalLevel { .. } | ComponentSpec::LocalLinearTrend { .. }
            )
        })
        .count();
    if trend_count > 1 {
        return Err(Error::invalid(
            "at most one trend component (local level or local linear trend) is allowed",
        ));
    }

    let mut b = Builder::new(n);

    for spec in components {
        match spec {
            ComponentSpec::LocalLevel { variance_prior } => {
                let s0 = b.state_offset();
                b.t_blocks.push(DMatrix::from_row_slice(1, 1, &[1.0]));
                b.z_const.push(1.0);
                let i0 = b.push_innovation(s0, "level".to_string(), *variance_prior);
                b.push_entry(
                    "level".to_string(),
                    ComponentGroup::Trend,
                    s0..s0 + 1,
                    i0..i0 + 1,
                    0..0,
                    vec![],
                );
            }
            ComponentSpec::LocalLinearTrend { level_prior, slope_prior } => {
                let s0 = b.state_offset();
                b.t_blocks
                    .push(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));
                b.z_const.extend_from_slice(&[1.0, 0.0]);
                let i0 = b.push_innovation(s0, "level".to_string(), *level_prior);
                b.push_innovation(s0 + 1, "slope".to_string(), *slope_prior);
                b.push_entry(
                    "trend".to_string(),
                    ComponentGroup::Trend,
                    s0..s0 + 2,
                    i0..i0 + 2,
                    0..0,
                    vec![],
                );
            }
            ComponentSpec::Seasonal { period, variance_prior } => {
                let s = *period;
                if s < 2 {
                    return Err(Error::invalid(format!(
                        "seasonal period must be at least 2, got {s}"
                    )));
                }
                if s > n / 2 {
                    return Err(Error::invalid(format!(
                        "seasonal period {s} exceeds half the series length {n}"
                    )));
                }
                let dim = s - 1;
                let s0 = b.state_offset();
                // First row all -1 (sum-to-zero recursion), identity on the
                // subdiagonal shifting past seasonal states down.
                let mut block = DMatrix::zeros(dim, dim);
                for j in 0..dim {
                    block[(0, j)] = -1.0;
                }
                for i in 1..dim {
                    block[(i, i - 1)] = 1.0;
                }
                b.t_blocks.push(block);
                b.z_const.push(1.0);
                b.z_const.extend(std::iter::repeat(0.0).take(dim - 1));
                let label = format!("seasonal_{s}");
                let i0 = b.push_innovation(s0, label.clone(), *variance_prior);
                b.push_entry(label, ComponentGroup::Seasonal, s0..s0 + dim, i0..i0 + 1, 0..0, vec![]);
            }
            ComponentSpec::Intervention { kind, onset, dynamic, coefficient_prior, variance_prior } => {
                let design = intervention_design(*kind, *onset, n)?;
                let name = format!("{}_{onset}", kind.as_str());
                if *dynamic {
                    let s0 = b.state_offset();
                    b.t_blocks.push(DMatrix::from_row_slice(1, 1, &[1.0]));
                    b.z_const.push(0.0);
                    b.z_dynamic.push((s0, design));
                    let i0 = b.push_innovation(s0, name.clone(), *variance_prior);
                    b.push_entry(
                        name.clone(),
                        ComponentGroup::Intervention,
                        s0..s0 + 1,
                        i0..i0 + 1,
                        0..0,
                        vec![name],
                    );
                } else {
                    // A configured intervention is known structure: default
                    // to certain inclusion rather than 50/50 selection.
                    let prior = coefficient_prior.unwrap_or(CoefPrior {
                        inclusion_prob: 1.0,
                        prior_mean: 0.0,
                        slab_variance: 1.0,
                    });
                    let c0 = b.push_static_column(name.clone(), design, prior);
                    b.push_entry(
                        name.clone(),
                        ComponentGroup::Intervention,
                        0..0,
                        0..0,
                        c0..c0 + 1,
                        vec![name],
                    );
                }
            }
            ComponentSpec::StaticRegression { design, labels, prior } => {
                validate_design(design, labels, n, "static regression")?;
                let k = design.ncols();
                let priors = match prior {
                    Some(p) => {
                        if p.len() != k {
                            return Err(Error::invalid(format!(
                                "spike-and-slab prior has {} entries for {k} design columns",
                                p.len()
                            )));
                        }
                        p.coefficients.clone()
                    }
                    None => SpikeSlabPrior::default_for(k).coefficients,
                };
                let mut c0 = b.static_cols.len();
                let first = c0;
                for (j, label) in labels.iter().enumerate() {
                    c0 = b.push_static_column(
                        label.clone(),
                        design.column(j).iter().copied().collect(),
                        priors[j],
                    );
                }
                b.push_entry(
                    "regression".to_string(),
                    ComponentGroup::StaticRegression,
                    0..0,
                    0..0,
                    first..c0 + 1,
                    labels.clone(),
                );
            }
            ComponentSpec::DynamicRegression { design, labels, variance_priors } => {
                validate_design(design, labels, n, "dynamic regression")?;
                let k = design.ncols();
                if let Some(vp) = variance_priors {
                    if vp.len() != k {
                        return Err(Error::invalid(format!(
                            "{} variance priors given for {k} dynamic columns",
                            vp.len()
                        )));
                    }
                }
                let s0 = b.state_offset();
                b.t_blocks.push(DMatrix::identity(k, k));
                let i0 = b.innovation_rows.len();
                for (j, label) in labels.iter().enumerate() {
                    b.z_const.push(0.0);
                    b.z_dynamic
                        .push((s0 + j, design.column(j).iter().copied().collect()));
                    b.push_innovation(
                        s0 + j,
                        format!("dyn_{label}"),
                        variance_priors.as_ref().map(|vp| vp[j]),
                    );
                }
                b.push_entry(
                    "dynamic_regression".to_string(),
                    ComponentGroup::DynamicRegression,
                    s0..s0 + k,
                    i0..i0 + k,
                    0..0,
                    labels.clone(),
                );
            }
        }
    }

    let m = b.z_const.len();
    if m == 0 && b.static_cols.is_empty() {
        return Err(Error::invalid("assembled model is empty"));
    }
    // The filter needs at least one state; a purely static model still
    // carries no state block and is not supported here.
    if m == 0 {
        return Err(Error::invalid(
            "a model needs at least one state component (level, trend, seasonal, or dynamic term)",
        ));
    }

    {
        let mut seen = std::collections::BTreeSet::new();
        for label in &b.static_labels {
            if !seen.insert(label.clone()) {
                return Err(Error::invalid(format!(
                    "duplicate static column label '{label}'"
                )));
            }
        }
    }

    // Block-diagonal transition.
    let mut transition = DMatrix::zeros(m, m);
    let mut off = 0;
    for block in &b.t_blocks {
        let d = block.nrows();
        transition.view_mut((off, off), (d, d)).copy_from(block);
        off += d;
    }

    // 0/1 loading: one column per innovation, targeting one state row.
    let r = b.innovation_rows.len();
    let mut loading = DMatrix::zeros(m, r);
    for (i, &row) in b.innovation_rows.iter().enumerate() {
        loading[(row, i)] = 1.0;
    }

    let z = if b.z_dynamic.is_empty() {
        ObsMap::Constant(RowDVector::from_row_slice(&b.z_const))
    } else {
        let base = RowDVector::from_row_slice(&b.z_const);
        let rows = (0..n)
            .map(|t| {
                let mut row = base.clone();
                for (idx, values) in &b.z_dynamic {
                    row[*idx] = values[t];
                }
                row
            })
            .collect();
        ObsMap::TimeVarying(rows)
    };

    let matrices = SystemMatrices::new(
        z,
        transition,
        loading,
        1.0,
        DVector::from_element(r.max(0), 1.0),
    )?;

    let k = b.static_cols.len();
    let mut static_design = DMatrix::zeros(n, k);
    for (j, col) in b.static_cols.iter().enumerate() {
        for (t, v) in col.iter().enumerate() {
            static_design[(t, j)] = *v;
        }
    }

    let layout = ModelLayout {
        entries: b.entries,
        state_dim: m,
        innovation_dim: r,
        static_dim: k,
        innovation_labels: b.innovation_labels,
        innovation_rows: b.innovation_rows,
        static_labels: b.static_labels,
    };

    Ok(AssembledModel {
        matrices,
        layout,
        static_design,
        static_priors: b.static_priors,
        innovation_priors: b.innovation_priors,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervention_designs_match_definitions() {
        assert_eq!(
            intervention_design(InterventionKind::Pulse, 3, 5).unwrap(),
            vec![0.0, 0.0, 1.0, 0.0, 0.0]
        );
        assert_eq!(
            intervention_design(InterventionKind::LevelShift, 3, 5).unwrap(),
            vec![0.0, 0.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(
            intervention_design(InterventionKind::SlopeShift, 3, 5).unwrap(),
            vec![0.0, 0.0, 1.0, 2.0, 3.0]
        );
    }

    #[test]
    fn intervention_onset_must_lie_in_sample() {
        assert!(intervention_design(InterventionKind::Pulse, 0, 5).is_err());
        assert!(intervention_design(InterventionKind::Pulse, 6, 5).is_err());
        assert!(intervention_design(InterventionKind::Pulse, 5, 5).is_ok());
    }

    #[test]
    fn local_level_matrices() {
        let model = assemble(&[ComponentSpec::local_level()], 10).unwrap();
        assert_eq!(model.layout.state_dim, 1);
        assert_eq!(model.matrices.transition()[(0, 0)], 1.0);
        assert_eq!(model.matrices.z_row(0)[0], 1.0);
        assert_eq!(model.layout.innovation_labels, vec!["level"]);
    }

    #[test]
    fn local_linear_trend_matrices() {
        let model = assemble(&[ComponentSpec::local_linear_trend()], 10).unwrap();
        let t = model.matrices.transition();
        assert_eq!(t[(0, 0)], 1.0);
        assert_eq!(t[(0, 1)], 1.0);
        assert_eq!(t[(1, 0)], 0.0);
        assert_eq!(t[(1, 1)], 1.0);
        let z = model.matrices.z_row(0);
        assert_eq!(z[0], 1.0);
        assert_eq!(z[1], 0.0);
        assert_eq!(model.layout.innovation_labels, vec!["level", "slope"]);
    }

    #[test]
    fn seasonal_four_expansion() {
        let model = assemble(&[ComponentSpec::local_level(), ComponentSpec::seasonal(4)], 20)
            .unwrap();
        assert_eq!(model.layout.state_dim, 1 + 3);
        let t = model.matrices.transition();
        // Seasonal block occupies rows/cols 1..4: first row all -1,
        // subdiagonal identity.
        for j in 1..4 {
            assert_eq!(t[(1, j)], -1.0);
        }
        assert_eq!(t[(2, 1)], 1.0);
        assert_eq!(t[(3, 2)], 1.0);
        assert_eq!(t[(2, 3)], 0.0);
        let z = model.matrices.z_row(0);
        assert_eq!(z[1], 1.0);
        assert_eq!(z[2], 0.0);
        assert_eq!(z[3], 0.0);
        // One innovation hitting the first seasonal state.
        assert_eq!(model.layout.innovation_rows, vec![0, 1]);
    }

    #[test]
    fn conflicting_trend_specs_are_rejected() {
        let res = assemble(
            &[ComponentSpec::local_level(), ComponentSpec::local_linear_trend()],
            10,
        );
        assert!(res.is_err());
    }

    #[test]
    fn seasonal_period_bounds() {
        assert!(assemble(&[ComponentSpec::local_level(), ComponentSpec::seasonal(1)], 10).is_err());
        assert!(assemble(&[ComponentSpec::local_level(), ComponentSpec::seasonal(6)], 10).is_err());
        assert!(assemble(&[ComponentSpec::local_level(), ComponentSpec::seasonal(5)], 10).is_ok());
    }

    #[test]
    fn design_length_must_match() {
        let design = DMatrix::from_column_slice(5, 1, &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let res = assemble(
            &[ComponentSpec::local_level(), ComponentSpec::static_regression(design)],
            10,
        );
        assert!(res.is_err());
    }

    #[test]
    fn static_regression_stays_out_of_state() {
        let design = DMatrix::from_column_slice(10, 2, &[0.5; 20]);
        let model = assemble(
            &[ComponentSpec::local_level(), ComponentSpec::static_regression(design)],
            10,
        )
        .unwrap();
        assert_eq!(model.layout.state_dim, 1);
        assert_eq!(model.layout.static_dim, 2);
        assert_eq!(model.layout.static_labels, vec!["x1", "x2"]);
    }

    #[test]
    fn dynamic_regression_enters_state_with_time_varying_obs_row() {
        let design = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]);
        let model = assemble(
            &[ComponentSpec::local_level(), ComponentSpec::dynamic_regression(design)],
            4,
        )
        .unwrap();
        assert_eq!(model.layout.state_dim, 2);
        for t in 0..4 {
            assert_eq!(model.matrices.z_row(t)[1], (t + 1) as f64);
            assert_eq!(model.matrices.z_row(t)[0], 1.0);
        }
    }

    #[test]
    fn static_intervention_defaults_to_certain_inclusion() {
        let model = assemble(
            &[
                ComponentSpec::local_level(),
                ComponentSpec::intervention(InterventionKind::LevelShift, 3),
            ],
            8,
        )
        .unwrap();
        assert_eq!(model.layout.static_dim, 1);
        assert_eq!(model.static_priors[0].inclusion_prob, 1.0);
        assert_eq!(model.static_design.column(0).iter().filter(|v| **v == 1.0).count(), 6);
    }

    #[test]
    fn superposition_is_block_diagonal() {
        let a = assemble(&[ComponentSpec::local_linear_trend()], 12).unwrap();
        let s = assemble(
            &[ComponentSpec::local_linear_trend(), ComponentSpec::seasonal(4)],
            12,
        )
        .unwrap();
        // The first block of the combined transition equals the lone trend
        // transition; the seasonal block sits below-right.
        let combined = s.matrices.transition();
        let lone = a.matrices.transition();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(combined[(i, j)], lone[(i, j)]);
                assert_eq!(combined[(i, j + 2)], 0.0);
                assert_eq!(combined[(i + 2, j)], 0.0);
            }
        }
    }
}
