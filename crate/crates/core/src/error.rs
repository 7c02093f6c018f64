use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants are grouped so that callers (the CLI in particular) can map
/// them onto distinct exit statuses: input problems are `Validation`,
/// anything that would exceed a configured limit is `Resource` or
/// `BoundExceeded`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("size {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("no objects to sample: {0}")]
    Impossible(String),

    #[error("x = {x} lies outside the support of {curve}")]
    Domain { curve: &'static str, x: f64 },

    #[error("{curve} has a vertical asymptote at x = {x}")]
    Pole { curve: &'static str, x: f64 },

    #[error("y = {y} lies outside the range of the {branch} branch of {curve}")]
    Range {
        curve: &'static str,
        branch: &'static str,
        y: f64,
    },

    #[error("series did not converge within {terms} terms")]
    Nonconvergence { terms: usize },

    #[error("solver failed: {0}")]
    SolverFailure(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by exceeding a size or memory budget.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::BoundExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
