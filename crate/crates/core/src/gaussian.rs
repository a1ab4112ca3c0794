//! Exact simulation of fractional Brownian motion at arbitrary finite time
//! sets, and the fractional mixture built from two independent components.
//!
//! The sampler factorizes the covariance matrix of the requested grid, so it
//! is exact at the grid points whatever their spacing. That matters here: the
//! operational times produced by an inverse subordinator are never uniform,
//! which rules out the usual stationary-increment fast paths as the normative
//! route.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};

/// Hurst exponent, constrained to (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hurst(f64);

impl Hurst {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::Parameter(format!(
                "Hurst exponent must lie in (0, 1), got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Covariance kernel of fractional Brownian motion,
/// `R_H(s, t) = (s^2H + t^2H - |t - s|^2H) / 2`.
pub fn fbm_covariance(h: Hurst, s: f64, t: f64) -> f64 {
    assert!(s >= 0.0 && t >= 0.0, "kernel arguments must be >= 0");
    let two_h = 2.0 * h.value();
    0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h))
}

/// Relative diagonal jitter applied once if the factorization fails on
/// near-duplicate times. Upstream deduplication of operational times is the
/// real fix; this is a safety net.
const JITTER_REL: f64 = 1e-12;

/// Lower-triangular factor of the fBm covariance matrix on strictly positive
/// times, with a single jitter retry.
fn covariance_factor(h: Hurst, times: &[f64]) -> Result<DMatrix<f64>> {
    let n = times.len();
    let cov = DMatrix::from_fn(n, n, |i, j| fbm_covariance(h, times[i], times[j]));
    if let Some(chol) = cov.clone().cholesky() {
        return Ok(chol.unpack());
    }
    let max_diag = (0..n).map(|i| cov[(i, i)]).fold(0.0_f64, f64::max);
    let jittered = cov + DMatrix::identity(n, n) * (JITTER_REL * max_diag);
    match jittered.cholesky() {
        Some(chol) => Ok(chol.unpack()),
        None => Err(Error::Factorization {
            grid: times.to_vec(),
        }),
    }
}

/// Draws one centered Gaussian path whose finite-dimensional covariance on
/// `grid` is exactly `[R_H(t_i, t_j)]`.
///
/// A grid point at exactly 0 is pinned to value 0 and excluded from the
/// factorized block, which keeps the covariance matrix nonsingular.
pub fn sample_fbm_at_times<R: Rng + ?Sized>(
    h: Hurst,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<SamplePath> {
    let times = grid.times();
    let pinned = grid.starts_at_zero();
    let positive = if pinned { &times[1..] } else { times };

    let mut values = Vec::with_capacity(times.len());
    if pinned {
        values.push(0.0);
    }
    if !positive.is_empty() {
        let factor = covariance_factor(h, positive)?;
        let z = DVector::from_fn(positive.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = factor * z;
        values.extend(x.iter());
    }
    SamplePath::new(grid.clone(), values)
}

/// Draws `a X + b Y` with `X`, `Y` independent fBm paths of exponents `h1`,
/// `h2` on the same grid.
///
/// A parent with coefficient exactly 0 is not sampled, so the consumed random
/// stream depends on which coefficients are zero; reproducibility is per
/// (parameters, seed).
pub fn sample_fmfbm<R: Rng + ?Sized>(
    a: f64,
    b: f64,
    h1: Hurst,
    h2: Hurst,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<SamplePath> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::Parameter(
            "mixture coefficients (a, b) must not both be zero".into(),
        ));
    }
    let mut values = vec![0.0; grid.len()];
    if a != 0.0 {
        let x = sample_fbm_at_times(h1, grid, rng)?;
        for (v, xi) in values.iter_mut().zip(&x.values) {
            *v += a * xi;
        }
    }
    if b != 0.0 {
        let y = sample_fbm_at_times(h2, grid, rng)?;
        for (v, yi) in values.iter_mut().zip(&y.values) {
            *v += b * yi;
        }
    }
    SamplePath::new(grid.clone(), values)
}
