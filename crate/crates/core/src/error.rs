use thiserror::Error;

/// Errors produced by the simulation and verification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range ((a,b) = (0,0), Hurst
    /// outside (0,1), alpha outside (0,1], non-positive initial price, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Arguments violate the domain of an operation (wrong order, zero
    /// variance, inapplicable reduction, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The covariance matrix of the requested grid could not be factorized,
    /// even after the diagonal jitter retry.
    #[error("covariance factorization failed for grid {grid:?}")]
    Factorization { grid: Vec<f64> },

    /// The subordinator grid would exceed the configured length cap before
    /// reaching the requested horizon.
    #[error("subordinator grid would exceed {cap} points before reaching t = {t_max}")]
    GridCap { cap: usize, t_max: f64 },

    /// A subordinator path does not reach the time requested for inversion.
    #[error("subordinator path ends at {reached} before requested time {needed}")]
    PathTooShort { needed: f64, reached: f64 },

    /// An estimator received degenerate input (single sample, zero variance).
    #[error("estimator error: {0}")]
    Estimator(String),

    /// The decay fit has too few usable points.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
