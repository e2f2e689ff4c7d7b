//! Prior families used by the Gibbs sampler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inverse-gamma prior for a variance, parameterized so that the precision
/// `1/s2 ~ Gamma(shape/2, rate = scale/2)`; the prior mean of the precision
/// is `shape/scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseGammaPrior {
    pub shape: f64,
    pub scale: f64,
}

impl InverseGammaPrior {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 || !scale.is_finite() || scale <= 0.0 {
            return Err(Error::invalid(format!(
                "inverse-gamma prior requires positive finite shape and scale, got ({shape}, {scale})"
            )));
        }
        Ok(InverseGammaPrior { shape, scale })
    }

    /// Weakly informative default: shape 0.01 and scale 0.01 times the
    /// sample variance of the data (floored away from zero so that a
    /// constant series still yields a proper prior).
    pub fn weakly_informative(sample_variance: f64) -> Self {
        InverseGammaPrior {
            shape: 0.01,
            scale: (0.01 * sample_variance).max(1e-12),
        }
    }
}

/// Spike-and-slab prior for one regression coefficient: with probability
/// `inclusion_prob` the coefficient is drawn from the Gaussian slab
/// `N(prior_mean, slab_variance)`, otherwise it is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefPrior {
    pub inclusion_prob: f64,
    pub prior_mean: f64,
    pub slab_variance: f64,
}

impl CoefPrior {
    pub fn new(inclusion_prob: f64, prior_mean: f64, slab_variance: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&inclusion_prob) || !inclusion_prob.is_finite() {
            return Err(Error::invalid(format!(
                "inclusion probability must lie in [0, 1], got {inclusion_prob}"
            )));
        }
        if !prior_mean.is_finite() {
            return Err(Error::invalid("coefficient prior mean must be finite"));
        }
        if !slab_variance.is_finite() || slab_variance <= 0.0 {
            return Err(Error::invalid(format!(
                "slab variance must be positive and finite, got {slab_variance}"
            )));
        }
        Ok(CoefPrior { inclusion_prob, prior_mean, slab_variance })
    }
}

impl Default for CoefPrior {
    /// Agnostic default on standardized data: inclusion 1/2, zero mean,
    /// unit slab variance.
    fn default() -> Self {
        CoefPrior { inclusion_prob: 0.5, prior_mean: 0.0, slab_variance: 1.0 }
    }
}

/// Spike-and-slab prior over a coefficient vector, one entry per design
/// column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeSlabPrior {
    pub coefficients: Vec<CoefPrior>,
}

impl SpikeSlabPrior {
    pub fn new(coefficients: Vec<CoefPrior>) -> Self {
        SpikeSlabPrior { coefficients }
    }

    /// Same prior for each of `k` columns.
    pub fn uniform(k: usize, inclusion_prob: f64, slab_variance: f64) -> Result<Self> {
        let one = CoefPrior::new(inclusion_prob, 0.0, slab_variance)?;
        Ok(SpikeSlabPrior { coefficients: vec![one; k] })
    }

    /// Default prior for `k` columns: inclusion 1/2, unit slab.
    pub fn default_for(k: usize) -> Self {
        SpikeSlabPrior { coefficients: vec![CoefPrior::default(); k] }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_hyperparameters() {
        assert!(InverseGammaPrior::new(0.0, 1.0).is_err());
        assert!(InverseGammaPrior::new(1.0, -1.0).is_err());
        assert!(CoefPrior::new(1.5, 0.0, 1.0).is_err());
        assert!(CoefPrior::new(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn weakly_informative_tracks_sample_variance() {
        let p = InverseGammaPrior::weakly_informative(4.0);
        assert_eq!(p.shape, 0.01);
        assert!((p.scale - 0.04).abs() < 1e-15);
        // Floored for degenerate data.
        let q = InverseGammaPrior::weakly_informative(0.0);
        assert!(q.scale > 0.0);
    }
}
