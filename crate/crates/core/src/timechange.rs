//! Composition of the Gaussian parents with the inverse subordinator, and the
//! subdiffusive price model built on top of it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{sample_fbm_at_times, Hurst};
use crate::grid::{SamplePath, TimeGrid};
use crate::subordinator::{sample_inverse_subordinator, StableIndex};

/// Full parameter set of the time-changed fractional mixture:
/// coefficients, the two Hurst exponents, and the stability index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FmfBmParams {
    pub a: f64,
    pub b: f64,
    pub h1: Hurst,
    pub h2: Hurst,
    pub alpha: StableIndex,
}

impl FmfBmParams {
    pub fn new(a: f64, b: f64, h1: Hurst, h2: Hurst, alpha: StableIndex) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Parameter("coefficients must be finite".into()));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::Parameter(
                "mixture coefficients (a, b) must not both be zero".into(),
            ));
        }
        Ok(Self { a, b, h1, h2, alpha })
    }
}

/// Parameters of the subdiffusive price model
/// `S_t = S0 exp(mu T_t + sigma L_t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PriceModelParams {
    pub s0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub mix: FmfBmParams,
}

impl PriceModelParams {
    pub fn new(s0: f64, mu: f64, sigma: f64, mix: FmfBmParams) -> Result<Self> {
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(Error::Parameter(format!("S0 must be > 0, got {s0}")));
        }
        if !(mu.is_finite() && sigma.is_finite()) {
            return Err(Error::Parameter("mu and sigma must be finite".into()));
        }
        Ok(Self { s0, mu, sigma, mix })
    }
}

/// One shared realization of the time change and the mixed parent values on
/// it: returns (T values, L values) on `t_grid`.
///
/// Equal time-change values map to the same parent evaluation, so flat
/// periods of T produce bitwise-equal L values. A parent whose coefficient is
/// exactly 0 is not sampled (it would waste a covariance factorization), so
/// the consumed random stream depends on which coefficients are zero.
fn draw_time_change_and_mix<R: Rng + ?Sized>(
    params: &FmfBmParams,
    t_grid: &TimeGrid,
    delta_r: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let inv = sample_inverse_subordinator(params.alpha, t_grid, delta_r, rng)?;
    let t_values = inv.values;

    // collapse flat periods: unique operational times, plus the index of each
    // grid point into them (T is non-decreasing, ties are exact)
    let mut unique = Vec::with_capacity(t_values.len());
    let mut index = Vec::with_capacity(t_values.len());
    for &v in &t_values {
        if unique.last() != Some(&v) {
            unique.push(v);
        }
        index.push(unique.len() - 1);
    }
    let op_grid = TimeGrid::new(unique)?;

    let parent = |h: Hurst, rng: &mut R| -> Result<Vec<f64>> {
        Ok(sample_fbm_at_times(h, &op_grid, rng)?.values)
    };
    let b1 = if params.a != 0.0 {
        Some(parent(params.h1, rng)?)
    } else {
        None
    };
    let b2 = if params.b != 0.0 {
        Some(parent(params.h2, rng)?)
    } else {
        None
    };

    let values = index
        .iter()
        .map(|&i| {
            let x = b1.as_ref().map_or(0.0, |v| params.a * v[i]);
            let y = b2.as_ref().map_or(0.0, |v| params.b * v[i]);
            x + y
        })
        .collect();
    Ok((t_values, values))
}

/// Samples the time-changed fractional mixture `a B1(T_t) + b B2(T_t)` on
/// `t_grid`: one inverse-subordinator realization shared by both parents,
/// parents sampled exactly at the unique operational times.
pub fn sample_time_changed_fmfbm<R: Rng + ?Sized>(
    params: &FmfBmParams,
    t_grid: &TimeGrid,
    delta_r: f64,
    rng: &mut R,
) -> Result<SamplePath> {
    let (_, values) = draw_time_change_and_mix(params, t_grid, delta_r, rng)?;
    SamplePath::new(t_grid.clone(), values)
}

/// Samples one price path `S_t = S0 exp(mu T_t + sigma L_t)` with T and L
/// drawn from a single shared time-change realization.
pub fn sample_price_path<R: Rng + ?Sized>(
    params: &PriceModelParams,
    t_grid: &TimeGrid,
    delta_r: f64,
    rng: &mut R,
) -> Result<SamplePath> {
    let (t_values, l_values) = draw_time_change_and_mix(&params.mix, t_grid, delta_r, rng)?;
    let values = t_values
        .iter()
        .zip(&l_values)
        .map(|(&t, &l)| params.s0 * (params.mu * t + params.sigma * l).exp())
        .collect();
    SamplePath::new(t_grid.clone(), values)
}
