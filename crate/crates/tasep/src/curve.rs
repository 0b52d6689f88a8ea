//! Sampled curves with an explicit "undefined" sentinel.

use serde::{Deserialize, Serialize};

/// A curve value: finite, or undefined (= -infinity for entropies).
/// A dedicated variant instead of NaN keeps comparisons and suprema total.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Value {
    NegInf,
    Finite(f64),
}

impl Value {
    pub fn finite(self) -> Option<f64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::NegInf => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }

    /// Finite value or a given default (used for suprema over curves).
    pub fn or(self, default: f64) -> f64 {
        self.finite().unwrap_or(default)
    }
}

/// A function sampled on an abscissa grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<Value>,
}

impl Curve {
    pub fn new(x: Vec<f64>, y: Vec<Value>) -> Self {
        assert_eq!(x.len(), y.len());
        Curve { x, y }
    }

    /// Sample f on n+1 equispaced points of [lo, hi].
    pub fn sample(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> Value) -> Self {
        let x: Vec<f64> = (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect();
        let y = x.iter().map(|&xi| f(xi)).collect();
        Curve { x, y }
    }

    pub fn finite_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x
            .iter()
            .zip(&self.y)
            .filter_map(|(&x, &y)| y.finite().map(|v| (x, v)))
    }
}
