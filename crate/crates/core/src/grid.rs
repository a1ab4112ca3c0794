//! Time grids and sampled paths, the carriers for every simulated process.

use crate::error::{Error, Result};

/// A strictly increasing, non-negative set of time points.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// Validates and wraps a list of time points.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Parameter("time grid must be nonempty".into()));
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::Parameter(format!(
                    "time grid entries must be finite and >= 0, got {t} at index {i}"
                )));
            }
            if i > 0 && times[i - 1] >= t {
                return Err(Error::Parameter(format!(
                    "time grid must be strictly increasing, got {} then {t}",
                    times[i - 1]
                )));
            }
        }
        Ok(Self { times })
    }

    /// `n` equally spaced points on `[t0, t1]`, endpoints exact.
    pub fn linspace(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("linspace needs n >= 2, got {n}")));
        }
        if !(t0 >= 0.0 && t1 > t0) {
            return Err(Error::Parameter(format!(
                "linspace needs 0 <= t0 < t1, got t0 = {t0}, t1 = {t1}"
            )));
        }
        let step = (t1 - t0) / (n - 1) as f64;
        let mut times: Vec<f64> = (0..n).map(|i| t0 + step * i as f64).collect();
        times[n - 1] = t1;
        Self::new(times)
    }

    /// `n` geometrically spaced points on `[t0, t1]`, endpoints exact.
    pub fn logspace(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("logspace needs n >= 2, got {n}")));
        }
        if !(t0 > 0.0 && t1 > t0) {
            return Err(Error::Parameter(format!(
                "logspace needs 0 < t0 < t1, got t0 = {t0}, t1 = {t1}"
            )));
        }
        let (l0, l1) = (t0.ln(), t1.ln());
        let step = (l1 - l0) / (n - 1) as f64;
        let mut times: Vec<f64> = (0..n).map(|i| (l0 + step * i as f64).exp()).collect();
        times[0] = t0;
        times[n - 1] = t1;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    pub fn first(&self) -> f64 {
        self.times[0]
    }

    pub fn last(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn starts_at_zero(&self) -> bool {
        self.times[0] == 0.0
    }
}

/// Process values on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Parameter(format!(
                "path has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }
}
