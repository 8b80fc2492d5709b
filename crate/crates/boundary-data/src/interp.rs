use std::f64::consts::TAU;

use crate::error::BoundaryError;

/// Monotone piecewise-cubic Hermite interpolant of a degree-one lifted
/// circle map, extended by `f(x + 2pi) = f(x) + 2pi`.
///
/// Slopes follow the Fritsch-Butland weighted harmonic mean, which keeps the
/// interpolant strictly increasing between strictly increasing samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicMonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl PeriodicMonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, BoundaryError> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(BoundaryError::TooFewSamples { needed: 4, got: n.min(y.len()) });
        }
        if !(x[0] >= 0.0 && x[n - 1] < TAU) {
            return Err(BoundaryError::NotAHomeomorphism { index: 0 });
        }
        for i in 0..n {
            let (x1, y1) = Self::node(&x, &y, i + 1);
            if !(x1 > x[i]) || !(y1 > y[i]) || !y[i].is_finite() {
                return Err(BoundaryError::NotAHomeomorphism { index: i });
            }
        }
        let secant = |i: usize| {
            let (x0, y0) = Self::node(&x, &y, i);
            let (x1, y1) = Self::node(&x, &y, i + 1);
            (x1 - x0, (y1 - y0) / (x1 - x0))
        };
        let m = (0..n)
            .map(|i| {
                let (h0, d0) = secant(i + n - 1);
                let (h1, d1) = secant(i);
                3.0 * (h0 + h1) / ((2.0 * h1 + h0) / d0 + (h1 + 2.0 * h0) / d1)
            })
            .collect();
        Ok(Self { x, y, m })
    }

    fn node(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
        let n = x.len();
        let wraps = (i / n) as f64;
        (x[i % n] + TAU * wraps, y[i % n] + TAU * wraps)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let turns = ((t - self.x[0]) / TAU).floor();
        let s = t - TAU * turns;
        // s in [x0, x0 + 2pi)
        let i = match self.x.partition_point(|&v| v <= s) {
            0 => 0,
            k => k - 1,
        };
        let (x0, y0) = Self::node(&self.x, &self.y, i);
        let (x1, y1) = Self::node(&self.x, &self.y, i + 1);
        let (m0, m1) = (self.m[i], self.m[(i + 1) % n]);
        let h = x1 - x0;
        let u = (s - x0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let v = (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * h * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * h * m1;
        v + TAU * turns
    }
}
