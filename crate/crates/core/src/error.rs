use thiserror::Error;

/// Errors raised by the numerical and analytical layers.
///
/// Evaluation failures carry whatever partial information is available so
/// that callers (notably the sweep runner) can record them per point instead
/// of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series argument {argument:.6} exceeds the convergence radius {radius}; use the contour-quadrature evaluator")]
    OutsideConvergence { argument: f64, radius: f64 },

    #[error("series did not converge after {terms} terms (last term / partial sum = {ratio:.3e})")]
    SeriesDivergence { terms: usize, ratio: f64 },

    #[error("series lost its accuracy to cancellation: rounding bound {bound:.3e} on a sum of {value:.6e}")]
    Cancellation { bound: f64, value: f64 },

    #[error("quadrature did not converge: best estimate {best:.17e}, error estimate {error_estimate:.3e}")]
    QuadratureNotConverged { best: f64, error_estimate: f64 },

    #[error("asymptotic branch is ambiguous: {0}")]
    AmbiguousBranch(String),

    #[error("method `{method}` is not defined for {what}")]
    Unsupported { method: &'static str, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
