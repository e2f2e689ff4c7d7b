//! Conjugate full-conditional draws: inverse-gamma variances and
//! spike-and-slab regression coefficients.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::inference::priors::{InverseGammaPrior, SpikeSlabPrior};

/// Draws a variance from its inverse-gamma full conditional given Gaussian
/// residuals: the precision is sampled from
/// `Gamma((shape + n)/2, rate = (scale + SSE)/2)` and inverted.
///
/// An empty residual slice yields a draw from the prior.
pub fn draw_variance<R: Rng + ?Sized>(
    residuals: &[f64],
    prior: &InverseGammaPrior,
    rng: &mut R,
) -> Result<f64> {
    if residuals.iter().any(|e| !e.is_finite()) {
        return Err(Error::invalid("non-finite residual"));
    }
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let shape = 0.5 * (prior.shape + residuals.len() as f64);
    let rate = 0.5 * (prior.scale + sse);
    // rand_distr parameterizes Gamma by (shape, scale); our rate is 1/scale.
    let gamma = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| Error::numerical(format!("invalid gamma parameters: {e}")))?;
    let precision = gamma.sample(rng);
    if precision <= 0.0 || !precision.is_finite() {
        return Err(Error::numerical(format!(
            "degenerate precision draw {precision}"
        )));
    }
    Ok(1.0 / precision)
}

/// Workspace for the spike-and-slab sweep: the marginal likelihood of the
/// target under a given inclusion set, up to terms that do not depend on
/// the set.
struct SsvsWorkspace<'a> {
    xtx: &'a DMatrix<f64>,
    xty: &'a DVector<f64>,
    obs_variance: f64,
    prior: &'a SpikeSlabPrior,
}

impl SsvsWorkspace<'_> {
    /// Log marginal likelihood of the included set `a` (sorted column
    /// indices), dropping all terms constant across inclusion sets:
    ///
    /// `-1/2 [ sum ln v_j + ln det(O) + sum b_j^2/v_j - h' O^-1 h ]`
    ///
    /// where `O = X_A'X_A / s2 + V_A^-1` and `h = X_A'y / s2 + V_A^-1 b_A`.
    fn log_marginal(&self, a: &[usize]) -> Result<f64> {
        if a.is_empty() {
            return Ok(0.0);
        }
        let ka = a.len();
        let mut omega = DMatrix::zeros(ka, ka);
        let mut h = DVector::zeros(ka);
        let mut log_slab_det = 0.0;
        let mut prior_quad = 0.0;
        for (i, &ji) in a.iter().enumerate() {
            let ci = &self.prior.coefficients[ji];
            log_slab_det += ci.slab_variance.ln();
            prior_quad += ci.prior_mean * ci.prior_mean / ci.slab_variance;
            h[i] = self.xty[ji] / self.obs_variance + ci.prior_mean / ci.slab_variance;
            for (l, &jl) in a.iter().enumerate() {
                omega[(i, l)] = self.xtx[(ji, jl)] / self.obs_variance;
            }
            omega[(i, i)] += 1.0 / ci.slab_variance;
        }
        let chol = omega.clone().cholesky().ok_or_else(|| {
            Error::numerical("singular conditional precision for included columns".to_string())
        })?;
        let log_det: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        let mu = chol.solve(&h);
        Ok(-0.5 * (log_slab_det + log_det + prior_quad - h.dot(&mu)))
    }

    /// Draws the included coefficients from their Gaussian full conditional
    /// `N(O^-1 h, O^-1)` and scatters them into a length-k vector with
    /// exact zeros elsewhere.
    fn draw_beta<R: Rng + ?Sized>(&self, a: &[usize], rng: &mut R) -> Result<DVector<f64>> {
        let k = self.prior.len();
        let mut beta = DVector::zeros(k);
        if a.is_empty() {
            return Ok(beta);
        }
        let ka = a.len();
        let mut omega = DMatrix::zeros(ka, ka);
        let mut h = DVector::zeros(ka);
        for (i, &ji) in a.iter().enumerate() {
            let ci = &self.prior.coefficients[ji];
            h[i] = self.xty[ji] / self.obs_variance + ci.prior_mean / ci.slab_variance;
            for (l, &jl) in a.iter().enumerate() {
                omega[(i, l)] = self.xtx[(ji, jl)] / self.obs_variance;
            }
            omega[(i, i)] += 1.0 / ci.slab_variance;
        }
        let chol = omega.clone().cholesky().ok_or_else(|| {
            Error::numerical("singular conditional precision for included columns".to_string())
        })?;
        let mu = chol.solve(&h);
        let z = DVector::from_fn(ka, |_, _| rng.sample(StandardNormal));
        // O = L L'; solving L' u = z gives u ~ N(0, O^-1).
        let u = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .ok_or_else(|| Error::numerical("triangular solve failed".to_string()))?;
        let draw = mu + u;
        for (i, &ji) in a.iter().enumerate() {
            if !draw[i].is_finite() {
                return Err(Error::numerical("non-finite coefficient draw".to_string()));
            }
            beta[ji] = draw[i];
        }
        Ok(beta)
    }
}

fn included(gamma: &[bool]) -> Vec<usize> {
    gamma
        .iter()
        .enumerate()
        .filter_map(|(j, g)| g.then_some(j))
        .collect()
}

fn validate_inputs(
    design: &DMatrix<f64>,
    target: &DVector<f64>,
    obs_variance: f64,
    prior: &SpikeSlabPrior,
) -> Result<()> {
    if design.nrows() != target.len() {
        return Err(Error::invalid(format!(
            "design has {} rows, target has {}",
            design.nrows(),
            target.len()
        )));
    }
    if design.ncols() != prior.len() {
        return Err(Error::invalid(format!(
            "design has {} columns, prior covers {}",
            design.ncols(),
            prior.len()
        )));
    }
    if !obs_variance.is_finite() || obs_variance <= 0.0 {
        return Err(Error::invalid(format!(
            "observation variance must be positive, got {obs_variance}"
        )));
    }
    if design.iter().any(|x| !x.is_finite()) || target.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite design or target entry"));
    }
    Ok(())
}

/// One spike-and-slab Gibbs step continuing from the inclusion state in
/// `gamma`: sweeps every indicator against its Bernoulli full conditional
/// (with the coefficients integrated out), then draws the included
/// coefficients from their Gaussian full conditional. Excluded coefficients
/// are exactly zero.
///
/// `gamma` is updated in place so that successive calls form a Markov chain
/// on (coefficients, inclusion).
pub fn draw_coefficients_from<R: Rng + ?Sized>(
    design: &DMatrix<f64>,
    target: &DVector<f64>,
    obs_variance: f64,
    prior: &SpikeSlabPrior,
    gamma: &mut [bool],
    rng: &mut R,
) -> Result<DVector<f64>> {
    validate_inputs(design, target, obs_variance, prior)?;
    if gamma.len() != prior.len() {
        return Err(Error::invalid(format!(
            "inclusion state has {} entries, prior covers {}",
            gamma.len(),
            prior.len()
        )));
    }
    let xtx = design.tr_mul(design);
    let xty = design.tr_mul(target).column(0).into_owned();
    let ws = SsvsWorkspace { xtx: &xtx, xty: &xty, obs_variance, prior };

    for j in 0..prior.len() {
        let pi = prior.coefficients[j].inclusion_prob;
        if pi >= 1.0 {
            gamma[j] = true;
            continue;
        }
        if pi <= 0.0 {
            gamma[j] = false;
            continue;
        }
        let mut with = included(gamma);
        if !gamma[j] {
            let pos = with.partition_point(|&idx| idx < j);
            with.insert(pos, j);
        }
        let without: Vec<usize> = with.iter().copied().filter(|&idx| idx != j).collect();
        let g1 = ws.log_marginal(&with)?;
        let g0 = ws.log_marginal(&without)?;
        let log_odds = (g1 + pi.ln()) - (g0 + (1.0 - pi).ln());
        let p1 = 1.0 / (1.0 + (-log_odds).exp());
        gamma[j] = rng.gen::<f64>() < p1;
    }

    ws.draw_beta(&included(gamma), rng)
}

/// Spike-and-slab draw starting from the prior's modal inclusion state
/// (column `j` starts included iff its prior inclusion probability is at
/// least 1/2). Returns the coefficient vector and the updated indicators.
///
/// Callers running a chain should keep the returned indicators and continue
/// with [`draw_coefficients_from`].
pub fn draw_coefficients<R: Rng + ?Sized>(
    design: &DMatrix<f64>,
    target: &DVector<f64>,
    obs_variance: f64,
    prior: &SpikeSlabPrior,
    rng: &mut R,
) -> Result<(DVector<f64>, Vec<bool>)> {
    let mut gamma: Vec<bool> = prior
        .coefficients
        .iter()
        .map(|c| c.inclusion_prob >= 0.5)
        .collect();
    let beta = draw_coefficients_from(design, target, obs_variance, prior, &mut gamma, rng)?;
    Ok((beta, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::priors::CoefPrior;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn prior_draw_matches_prior_mean_of_precision() {
        let prior = InverseGammaPrior::new(4.0, 2.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let n = 100_000;
        let mean_precision: f64 = (0..n)
            .map(|_| 1.0 / draw_variance(&[], &prior, &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        // Prior mean of the precision is shape/scale = 2.
        assert!(
            (mean_precision - 2.0).abs() / 2.0 < 0.02,
            "mean precision {mean_precision}"
        );
    }

    #[test]
    fn variance_draws_are_deterministic_under_a_seed() {
        let prior = InverseGammaPrior::new(1.0, 1.0).unwrap();
        let residuals = vec![0.5, -1.0, 0.25];
        let a = draw_variance(&residuals, &prior, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let b = draw_variance(&residuals, &prior, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_inclusion_probability_forces_exact_zero() {
        let design = DMatrix::from_column_slice(4, 2, &[1.0, 2.0, 3.0, 4.0, 0.5, 0.5, 0.5, 0.5]);
        let target = DVector::from_row_slice(&[1.0, 2.0, 3.0, 4.0]);
        let prior = SpikeSlabPrior::uniform(2, 0.0, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let (beta, gamma) = draw_coefficients(&design, &target, 1.0, &prior, &mut rng).unwrap();
        assert_eq!(beta[0], 0.0);
        assert_eq!(beta[1], 0.0);
        assert!(!gamma[0] && !gamma[1]);
    }

    #[test]
    fn inclusion_and_coefficients_agree_bitwise() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let n = 40;
        let design = DMatrix::from_fn(n, 3, |_, _| rng.gen::<f64>() - 0.5);
        let target = DVector::from_fn(n, |i, _| design[(i, 0)] * 2.0 + 0.1 * (i as f64).sin());
        let prior = SpikeSlabPrior::default_for(3);
        let mut gamma = vec![true, true, true];
        for _ in 0..200 {
            let beta =
                draw_coefficients_from(&design, &target, 1.0, &prior, &mut gamma, &mut rng)
                    .unwrap();
            for j in 0..3 {
                assert_eq!(gamma[j], beta[j] != 0.0);
            }
        }
    }

    #[test]
    fn certain_inclusion_with_flat_slab_concentrates_on_least_squares() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let n = 100;
        let design = DMatrix::from_fn(n, 3, |_, _| {
            let u: f64 = rng.gen();
            u - 0.5
        });
        let truth = DVector::from_row_slice(&[1.5, -0.7, 0.3]);
        let target = DVector::from_fn(n, |i, _| {
            (design.row(i) * &truth)[(0, 0)] + {
                let z: f64 = rng.sample(StandardNormal);
                0.3 * z
            }
        });
        let ols = (design.tr_mul(&design))
            .cholesky()
            .unwrap()
            .solve(&design.tr_mul(&target));
        let prior = SpikeSlabPrior::new(vec![
            CoefPrior::new(1.0, 0.0, 1e8).unwrap();
            3
        ]);
        let sigma2 = 0.09;
        let draws = 10_000;
        let mut mean = DVector::zeros(3);
        for _ in 0..draws {
            let (beta, _) = draw_coefficients(&design, &target, sigma2, &prior, &mut rng).unwrap();
            mean += beta;
        }
        mean /= draws as f64;
        // Posterior covariance is sigma2 (X'X)^-1; standard error of the MC
        // mean of `draws` independent draws is its sd / sqrt(draws).
        let cov = (design.tr_mul(&design) / sigma2)
            .try_inverse()
            .unwrap();
        for j in 0..3 {
            let se = (cov[(j, j)] / draws as f64).sqrt();
            assert!(
                (mean[j] - ols[(j, 0)]).abs() < 3.0 * se + 1e-6,
                "column {j}: mc mean {} vs ols {}",
                mean[j],
                ols[(j, 0)]
            );
        }
    }

    #[test]
    fn rejects_dimension_mismatches() {
        let design = DMatrix::zeros(4, 2);
        let target = DVector::zeros(3);
        let prior = SpikeSlabPrior::default_for(2);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(draw_coefficients(&design, &target, 1.0, &prior, &mut rng).is_err());
    }
}
