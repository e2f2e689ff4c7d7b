//! Gaussian linear state-space models.
//!
//! The observation is univariate:
//!
//! ```text
//! y_t     = Z_t a_t + e_t,        e_t ~ N(0, H)
//! a_{t+1} = T a_t + R n_t,        n_t ~ N(0, diag(Q))
//! ```
//!
//! `Z_t` is a 1 x m row that may vary over time (time-varying regression);
//! the transition matrix `T`, the m x r innovation-loading matrix `R`, the
//! observation variance `H` and the diagonal innovation variances `Q` are
//! constant. The prior for the state at the first observation time is a
//! [`GaussianState`].

mod filter;
mod simulate;

pub use filter::{kalman_filter, kalman_smooth, FilterResult};
pub use simulate::{simulate_data, simulate_states, SimulatedData};

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{Error, Result};

/// Symmetry / positive-semidefiniteness tolerance for user-supplied
/// covariance matrices.
pub const COVARIANCE_TOL: f64 = 1e-10;

/// Default scale of the approximately diffuse initial covariance.
pub const DIFFUSE_SCALE: f64 = 1e7;

/// Observation map `Z_t`: either one row shared by every time point or one
/// row per time point.
#[derive(Debug, Clone, PartialEq)]
pub enum ObsMap {
    Constant(RowDVector<f64>),
    TimeVarying(Vec<RowDVector<f64>>),
}

impl ObsMap {
    pub fn state_dim(&self) -> usize {
        match self {
            ObsMap::Constant(z) => z.len(),
            ObsMap::TimeVarying(rows) => rows.first().map_or(0, |z| z.len()),
        }
    }

    pub fn row(&self, t: usize) -> &RowDVector<f64> {
        match self {
            ObsMap::Constant(z) => z,
            ObsMap::TimeVarying(rows) => &rows[t],
        }
    }

    fn validate(&self, state_dim: usize) -> Result<()> {
        let check_row = |z: &RowDVector<f64>, t: Option<usize>| -> Result<()> {
            if z.len() != state_dim {
                return Err(Error::invalid(format!(
                    "observation row has {} entries, state dimension is {}",
                    z.len(),
                    state_dim
                )));
            }
            if z.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(match t {
                    Some(t) => format!("non-finite observation row at time {t}"),
                    None => "non-finite observation row".to_string(),
                }));
            }
            Ok(())
        };
        match self {
            ObsMap::Constant(z) => check_row(z, None),
            ObsMap::TimeVarying(rows) => {
                if rows.is_empty() {
                    return Err(Error::invalid("time-varying observation map is empty"));
                }
                for (t, z) in rows.iter().enumerate() {
                    check_row(z, Some(t))?;
                }
                Ok(())
            }
        }
    }
}

/// System matrices of the model described in the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    z: ObsMap,
    transition: DMatrix<f64>,
    loading: DMatrix<f64>,
    obs_variance: f64,
    state_variances: DVector<f64>,
}

impl SystemMatrices {
    /// Validates dimensions, finiteness and variance signs.
    pub fn new(
        z: ObsMap,
        transition: DMatrix<f64>,
        loading: DMatrix<f64>,
        obs_variance: f64,
        state_variances: DVector<f64>,
    ) -> Result<Self> {
        let m = transition.nrows();
        if transition.ncols() != m || m == 0 {
            return Err(Error::invalid(format!(
                "transition matrix must be square and non-empty, got {}x{}",
                transition.nrows(),
                transition.ncols()
            )));
        }
        z.validate(m)?;
        if loading.nrows() != m {
            return Err(Error::invalid(format!(
                "innovation loading has {} rows, state dimension is {m}",
                loading.nrows()
            )));
        }
        if loading.ncols() != state_variances.len() {
            return Err(Error::invalid(format!(
                "innovation loading has {} columns but {} innovation variances were given",
                loading.ncols(),
                state_variances.len()
            )));
        }
        if transition.iter().any(|x| !x.is_finite()) || loading.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite entry in system matrices"));
        }
        if !obs_variance.is_finite() || obs_variance < 0.0 {
            return Err(Error::invalid(format!(
                "observation variance must be finite and non-negative, got {obs_variance}"
            )));
        }
        if state_variances.iter().any(|q| !q.is_finite() || *q < 0.0) {
            return Err(Error::invalid(
                "innovation variances must be finite and non-negative",
            ));
        }
        Ok(SystemMatrices { z, transition, loading, obs_variance, state_variances })
    }

    pub fn state_dim(&self) -> usize {
        self.transition.nrows()
    }

    pub fn innovation_dim(&self) -> usize {
        self.state_variances.len()
    }

    /// Number of time points the observation map covers, when time-varying.
    pub fn time_varying_len(&self) -> Option<usize> {
        match &self.z {
            ObsMap::Constant(_) => None,
            ObsMap::TimeVarying(rows) => Some(rows.len()),
        }
    }

    pub fn obs_map(&self) -> &ObsMap {
        &self.z
    }

    pub fn z_row(&self, t: usize) -> &RowDVector<f64> {
        self.z.row(t)
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn loading(&self) -> &DMatrix<f64> {
        &self.loading
    }

    pub fn obs_variance(&self) -> f64 {
        self.obs_variance
    }

    pub fn state_variances(&self) -> &DVector<f64> {
        &self.state_variances
    }

    /// Replaces the observation variance (used by samplers that update
    /// variances in place between sweeps).
    pub fn set_obs_variance(&mut self, h: f64) -> Result<()> {
        if !h.is_finite() || h < 0.0 {
            return Err(Error::invalid(format!(
                "observation variance must be finite and non-negative, got {h}"
            )));
        }
        self.obs_variance = h;
        Ok(())
    }

    /// Replaces the innovation variances.
    pub fn set_state_variances(&mut self, q: DVector<f64>) -> Result<()> {
        if q.len() != self.state_variances.len() {
            return Err(Error::invalid(format!(
                "expected {} innovation variances, got {}",
                self.state_variances.len(),
                q.len()
            )));
        }
        if q.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                "innovation variances must be finite and non-negative",
            ));
        }
        self.state_variances = q;
        Ok(())
    }

    /// The process covariance `R diag(Q) R'`.
    pub fn process_covariance(&self) -> DMatrix<f64> {
        let scaled = {
            let mut s = self.loading.clone();
            for (j, mut col) in s.column_iter_mut().enumerate() {
                col *= self.state_variances[j];
            }
            s
        };
        &scaled * self.loading.transpose()
    }
}

/// Gaussian distribution over a state vector: a mean and a covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state distribution, checking that the covariance is square,
    /// symmetric within [`COVARIANCE_TOL`] and has eigenvalues above
    /// `-COVARIANCE_TOL`.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let m = mean.len();
        if covariance.nrows() != m || covariance.ncols() != m {
            return Err(Error::invalid(format!(
                "covariance is {}x{}, mean has length {m}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) || covariance.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite entry in state distribution"));
        }
        let asym = (&covariance - covariance.transpose()).abs().max();
        if asym > COVARIANCE_TOL {
            return Err(Error::invalid(format!(
                "covariance is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let sym = symmetrize(&covariance);
        let min_eig = sym
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -COVARIANCE_TOL {
            return Err(Error::invalid(format!(
                "covariance is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(GaussianState { mean, covariance: sym })
    }

    /// Internal constructor for states produced by the recursions themselves,
    /// which are symmetric PSD by construction.
    pub(crate) fn from_parts(mean: DVector<f64>, covariance: DMatrix<f64>) -> Self {
        GaussianState { mean, covariance }
    }

    /// Approximately diffuse prior: zero mean, `scale * I` covariance.
    pub fn diffuse(dim: usize, scale: f64) -> Self {
        GaussianState {
            mean: DVector::zeros(dim),
            covariance: DMatrix::identity(dim, dim) * scale,
        }
    }

    /// Degenerate (known) state: the given mean with zero covariance.
    pub fn fixed(mean: DVector<f64>) -> Self {
        let dim = mean.len();
        GaussianState { mean, covariance: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// `0.5 (P + P')` — keeps covariance recursions symmetric against roundoff.
pub(crate) fn symmetrize(p: &DMatrix<f64>) -> DMatrix<f64> {
    0.5 * (p + p.transpose())
}

/// Square root of a symmetric PSD matrix via its eigendecomposition, with
/// small negative eigenvalues clamped to zero. Used to draw from possibly
/// singular Gaussians (components with zero innovation variance).
pub(crate) fn psd_sqrt(p: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = symmetrize(p).symmetric_eigen();
    let mut vectors = eig.eigenvectors;
    for (j, mut col) in vectors.column_iter_mut().enumerate() {
        col *= eig.eigenvalues[j].max(0.0).sqrt();
    }
    vectors
}
