//! Piecewise-constant density profiles on [-1, 1].

use crate::error::Error;
use crate::scalar::s_unchecked;
use serde::{Deserialize, Serialize};

/// A piecewise-constant density profile. `breakpoints` has n+1 strictly
/// increasing entries from -1 to 1; `values[i]` in [0,1] is the density
/// on [breakpoints[i], breakpoints[i+1]].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl Profile {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, Error> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::invalid("need n+1 breakpoints for n cell values"));
        }
        if breakpoints.first() != Some(&-1.0) || breakpoints.last() != Some(&1.0) {
            return Err(Error::invalid("breakpoints must span [-1, 1]"));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("densities must lie in [0,1]"));
        }
        Ok(Profile {
            breakpoints,
            values,
        })
    }

    /// Constant profile on a uniform n-cell grid.
    pub fn constant(rho: f64, n: usize) -> Result<Self, Error> {
        Profile::uniform(vec![rho; n.max(1)])
    }

    /// Profile from cell values on the uniform grid over [-1, 1].
    pub fn uniform(values: Vec<f64>) -> Result<Self, Error> {
        let n = values.len();
        let breakpoints = (0..=n)
            .map(|i| -1.0 + 2.0 * i as f64 / n as f64)
            .collect();
        Profile::new(breakpoints, values)
    }

    /// Step profile: `left` on [-1, at), `right` on [at, 1].
    pub fn step(left: f64, right: f64, at: f64) -> Result<Self, Error> {
        if at <= -1.0 || at >= 1.0 {
            return Err(Error::invalid("step location must be interior"));
        }
        Profile::new(vec![-1.0, at, 1.0], vec![left, right])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.windows(2).map(|w| w[1] - w[0])
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let i = self
            .breakpoints
            .partition_point(|&b| b <= x)
            .clamp(1, self.values.len());
        self.values[i - 1]
    }

    /// Resample onto the uniform n-cell grid (cell-averaged exactly).
    pub fn resample(&self, n: usize) -> Profile {
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let a = -1.0 + 2.0 * i as f64 / n as f64;
            let b = -1.0 + 2.0 * (i + 1) as f64 / n as f64;
            let mut acc = 0.0;
            for (w, &v) in self.breakpoints.windows(2).zip(&self.values) {
                let lo = w[0].max(a);
                let hi = w[1].min(b);
                if hi > lo {
                    acc += (hi - lo) * v;
                }
            }
            values.push((acc / (b - a)).clamp(0.0, 1.0));
        }
        Profile::uniform(values).expect("uniform grid is valid")
    }
}

/// Gibbs-Shannon entropy of a profile: -(1/2) integral of s(rho(x)) dx,
/// exact for piecewise-constant profiles.
pub fn gibbs_shannon(profile: &Profile) -> f64 {
    -0.5 * profile
        .cell_widths()
        .zip(profile.values())
        .map(|(w, &v)| w * s_unchecked(v))
        .sum::<f64>()
}
