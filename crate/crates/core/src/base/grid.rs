use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly sampled closed interval `[a, b]` with trapezoid weights.
///
/// The grid points are the characters of the function algebra, so the
/// Gelfand space of the model is exactly this point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactGrid {
    a: f64,
    b: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl CompactGrid {
    pub const DEFAULT_POINTS: usize = 4096;

    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {n}")));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(format!("invalid interval [{a}, {b}]")));
        }
        let h = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        points[n - 1] = b;
        let mut weights = vec![h; n];
        weights[0] = h / 2.0;
        weights[n - 1] = h / 2.0;
        Ok(Self { a, b, points, weights })
    }

    /// Unit interval with the default resolution.
    pub fn unit() -> Self {
        Self::uniform(0.0, 1.0, Self::DEFAULT_POINTS).expect("valid default grid")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn measure(&self) -> f64 {
        self.b - self.a
    }

    pub fn spacing(&self) -> f64 {
        self.measure() / (self.len() - 1) as f64
    }

    /// Indices of the window of `width` consecutive points starting at `start`.
    pub fn window(&self, start: usize, width: usize) -> std::ops::Range<usize> {
        let end = (start + width).min(self.len());
        start.min(end)..end
    }

    /// Index of the grid point nearest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let raw = ((t - self.a) / self.spacing()).round();
        (raw.max(0.0) as usize).min(self.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_measure() {
        for &(a, b, n) in &[(0.0, 1.0, 4096), (-2.0, 3.0, 17), (0.0, 1.0, 2)] {
            let g = CompactGrid::uniform(a, b, n).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!(((s - (b - a)) / (b - a)).abs() <= 1e-12);
            assert!(g.points().windows(2).all(|w| w[0] < w[1]));
            assert!(g.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(CompactGrid::uniform(0.0, 1.0, 1).is_err());
        assert!(CompactGrid::uniform(1.0, 1.0, 8).is_err());
    }
}
