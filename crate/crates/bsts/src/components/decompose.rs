//! Posterior decomposition of a fitted model into component contributions.

use nalgebra::DMatrix;

use crate::components::{AssembledModel, ComponentGroup};
use crate::error::{Error, Result};
use crate::inference::PosteriorDraws;
use crate::util::shortest_interval;

/// Credible mass of the decomposition bands.
const BAND_MASS: f64 = 0.95;

/// Per-time contribution of one component group: posterior mean, 95%
/// credible band, and the underlying per-draw contributions
/// (`n_draws x n`).
#[derive(Debug, Clone)]
pub struct ComponentSeries {
    pub name: String,
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub draws: DMatrix<f64>,
}

impl ComponentSeries {
    fn from_draws(name: String, draws: DMatrix<f64>) -> Self {
        let n = draws.ncols();
        let mut mean = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let mut buf = vec![0.0; draws.nrows()];
        for t in 0..n {
            for (d, v) in draws.column(t).iter().enumerate() {
                buf[d] = *v;
            }
            mean.push(buf.iter().sum::<f64>() / buf.len() as f64);
            buf.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (lo, hi) = shortest_interval(&buf, BAND_MASS);
            lower.push(lo);
            upper.push(hi);
        }
        ComponentSeries { name, mean, lower, upper, draws }
    }
}

/// Additive decomposition of the fitted observation mean.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// One series per component group present in the model, in fixed order:
    /// trend, seasonal, intervention, static regression, dynamic regression.
    pub components: Vec<ComponentSeries>,
    /// The total fitted observation mean (sum of all groups, per draw).
    pub fitted: ComponentSeries,
}

/// Splits each retained draw's fitted observation mean into per-group
/// contributions. For every draw and time point the group contributions sum
/// exactly (in floating point, to roundoff) to the draw's fitted mean
/// `Z_t a_t + x_t' b`.
pub fn decompose(draws: &PosteriorDraws, model: &AssembledModel) -> Result<Decomposition> {
    if draws.layout != model.layout {
        return Err(Error::invalid(
            "posterior draws were produced by a model with a different layout",
        ));
    }
    let n_draws = draws.len();
    if n_draws == 0 {
        return Err(Error::invalid("no retained draws to decompose"));
    }
    let n = model.n;
    let layout = &model.layout;

    let groups: Vec<ComponentGroup> = ComponentGroup::ORDER
        .iter()
        .copied()
        .filter(|g| layout.entries.iter().any(|e| e.group == *g))
        .collect();

    let mut group_draws: Vec<DMatrix<f64>> =
        groups.iter().map(|_| DMatrix::zeros(n_draws, n)).collect();
    let mut fitted = DMatrix::zeros(n_draws, n);

    for d in 0..n_draws {
        let states = &draws.states[d];
        let beta = &draws.coefficients[d];
        for t in 0..n {
            let z = model.matrices.z_row(t);
            let mut total = 0.0;
            for entry in &layout.entries {
                let mut contribution = 0.0;
                for i in entry.states.clone() {
                    contribution += z[i] * states[(t, i)];
                }
                for j in entry.static_cols.clone() {
                    contribution += model.static_design[(t, j)] * beta[j];
                }
                let slot = groups.iter().position(|g| *g == entry.group).expect("group present");
                group_draws[slot][(d, t)] += contribution;
                total += contribution;
            }
            fitted[(d, t)] = total;
        }
    }

    let components = groups
        .iter()
        .zip(group_draws)
        .map(|(g, m)| ComponentSeries::from_draws(g.as_str().to_string(), m))
        .collect();
    let fitted = ComponentSeries::from_draws("fitted".to_string(), fitted);
    Ok(Decomposition { components, fitted })
}
