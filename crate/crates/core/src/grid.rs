//! Uniform time grids and composite Simpson quadrature on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform grid of `n_points` times spanning `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    start: f64,
    end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::domain(format!(
                "a time grid needs at least 2 points, got {n_points}"
            )));
        }
        if !(start.is_finite() && end.is_finite()) || end <= start {
            return Err(Error::domain(format!(
                "time grid bounds must be finite with start < end, got [{start}, {end}]"
            )));
        }
        Ok(Self {
            start,
            end,
            n_points,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn span(&self) -> f64 {
        self.end - self.start
    }

    pub fn spacing(&self) -> f64 {
        self.span() / (self.n_points - 1) as f64
    }

    /// Time of node `k`. The last node is exactly `end`.
    pub fn time(&self, k: usize) -> f64 {
        debug_assert!(k < self.n_points);
        if k == self.n_points - 1 {
            self.end
        } else {
            self.start + self.span() * k as f64 / (self.n_points - 1) as f64
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.time(k)).collect()
    }

    /// The same grid translated by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        Self {
            start: self.start + offset,
            end: self.end + offset,
            n_points: self.n_points,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }

    /// Whether `other` has the same node count and its nodes coincide with
    /// ours to within `rel_tol` of the spacing.
    pub fn matches(&self, other: &TimeGrid, rel_tol: f64) -> bool {
        let tol = rel_tol * self.spacing();
        self.n_points == other.n_points
            && (self.start - other.start).abs() <= tol
            && (self.end - other.end).abs() <= tol
    }
}

/// Running integral `∫_{x_0}^{x_k} y dx` at every node of a uniform grid with
/// spacing `h`.
///
/// Even nodes use composite Simpson; odd nodes add a three-point partial
/// panel to the preceding even node, so every entry is third-order or better.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    for i in 1..n {
        out[i] = if i % 2 == 0 {
            out[i - 2] + h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i])
        } else if i + 1 < n {
            out[i - 1] + h / 12.0 * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1])
        } else {
            out[i - 1] + h / 12.0 * (-values[i - 2] + 8.0 * values[i - 1] + 5.0 * values[i])
        };
    }
    out
}

/// Integral from each node to the end of the grid, `∫_{x_k}^{x_{n-1}} y dx`.
pub fn reverse_cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let reversed: Vec<f64> = values.iter().rev().copied().collect();
    let mut out = cumulative_simpson(&reversed, h);
    out.reverse();
    out
}

/// Integral over the whole grid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    cumulative_simpson(values, h).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(2.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 10).is_err());
    }

    #[test]
    fn nodes_are_uniform() {
        let grid = TimeGrid::new(-3.0, 47.0, 4001).unwrap();
        let h = grid.spacing();
        let times = grid.times();
        assert_eq!(times[0], -3.0);
        assert_eq!(*times.last().unwrap(), 47.0);
        for w in times.windows(2) {
            assert!(((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        }
    }

    #[test]
    fn simpson_exactness() {
        // odd and even node counts
        for n in [5usize, 6, 101, 102] {
            let grid = TimeGrid::new(0.0, 2.0, n).unwrap();
            let h = grid.spacing();
            let quad: Vec<f64> = grid.times().iter().map(|t| 3.0 * t * t - t).collect();
            let cubic: Vec<f64> = grid.times().iter().map(|t| t * t * t - t).collect();
            let cum_quad = cumulative_simpson(&quad, h);
            let cum_cubic = cumulative_simpson(&cubic, h);
            for (k, t) in grid.times().iter().enumerate() {
                assert_relative_eq!(cum_quad[k], t.powi(3) - t * t / 2.0, epsilon = 1e-12);
                if k % 2 == 0 {
                    let exact = t.powi(4) / 4.0 - t * t / 2.0;
                    assert_relative_eq!(cum_cubic[k], exact, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn reverse_cumulative_complements_forward() {
        let grid = TimeGrid::new(0.0, 5.0, 501).unwrap();
        let y: Vec<f64> = grid.times().iter().map(|t| (-t).exp()).collect();
        let fwd = cumulative_simpson(&y, grid.spacing());
        let rev = reverse_cumulative_simpson(&y, grid.spacing());
        let total = simpson(&y, grid.spacing());
        for k in 0..grid.len() {
            assert!((fwd[k] + rev[k] - total).abs() < 1e-9);
        }
        // relative accuracy of the tail survives near the end
        let t = grid.time(490);
        assert_relative_eq!(rev[490], (-t).exp() - (-5.0f64).exp(), max_relative = 1e-8);
    }
}
