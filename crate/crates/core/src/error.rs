use thiserror::Error;

/// Every failure the kernels, engines and harness can report.
///
/// Kernels never return NaN or infinite sentinels; anything that would have
/// produced one surfaces here instead, so the harness can tell "identity does
/// not hold" apart from "kernel was asked for something outside its domain".
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {function} is singular at {at}")]
    Pole { function: &'static str, at: String },

    #[error("domain error in {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("overflow in {function}")]
    Overflow { function: &'static str },

    #[error("{function} did not converge: {reason}")]
    NonConvergence { function: &'static str, reason: String },

    #[error("decay exponent {0} does not guarantee convergence (need p > 1)")]
    DivergentHint(f64),

    #[error("endpoint exponent {0} is not integrable (need > -1)")]
    EndpointSingularity(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("degenerate importance proposal: {0}")]
    DegenerateProposal(String),

    #[error("hypothesis violated for {id}: {reason}")]
    Hypothesis { id: String, reason: String },

    #[error("no closed-form inner product for {0} x {1}")]
    UnsupportedCombination(String, String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }

    pub(crate) fn no_convergence(function: &'static str, reason: impl Into<String>) -> Self {
        Error::NonConvergence {
            function,
            reason: reason.into(),
        }
    }
}
