//! Error types shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument or parameter lies outside its admissible range.
    #[error("domain error: {name} = {value} violates `{requirement}`")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The model instance violates the feasibility conditions the operation
    /// relies on.
    #[error("infeasible model: {reason}")]
    Infeasible { reason: String },

    /// Too few observations to run an estimator.
    #[error("insufficient data: need at least {needed} tail observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// All tail observations coincide with the fitting cutoff, so the
    /// exponent estimator has no variation to work with.
    #[error("insufficient variation: all {count} tail observations equal s_min = {s_min}")]
    InsufficientVariation { s_min: u64, count: usize },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }

    pub(crate) fn infeasible(reason: impl Into<String>) -> Self {
        Error::Infeasible {
            reason: reason.into(),
        }
    }
}
