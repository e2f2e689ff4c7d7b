//! Error type shared across the crate.

/// Errors produced by model construction, filtering, sampling, and the
/// preprocessing utilities.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Inputs violate a documented precondition (dimension mismatch,
    /// out-of-range argument, non-finite value, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A numerical operation failed (singular system, non-positive
    /// predictive variance, failed factorization, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A sampler produced a non-finite value. The iteration index is the
    /// zero-based sweep at which divergence was detected.
    #[error("sampler diverged at iteration {iteration}: {message}")]
    Divergent { iteration: usize, message: String },

    /// A calibration chain failed; carries the seed of the failing chain.
    #[error("chain with seed {seed} failed: {source}")]
    ChainFailed {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
