//! Piecewise-cubic Hermite interpolation on uniform grids.
//!
//! Node slopes come from fourth-order finite differences and are then passed
//! through a Hyman-type limiter: wherever the data are locally monotone the
//! slope is clipped so that the cubic on each side cannot overshoot. At
//! sampled extrema the high-order slope is kept, so smooth peaks are not
//! flattened.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    grid: TimeGrid,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} samples supplied for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("interpolation samples must be finite"));
        }
        let slopes = limited_slopes(&values, grid.spacing());
        Ok(Self {
            grid,
            values,
            slopes,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `t`; errors when `t` lies outside the grid.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let slack = 1e-12 * self.grid.span();
        if !(t >= self.grid.start() - slack && t <= self.grid.end() + slack) {
            return Err(Error::domain(format!(
                "t = {t} outside interpolation range [{}, {}]",
                self.grid.start(),
                self.grid.end()
            )));
        }
        Ok(self.eval_clamped(t))
    }

    /// Value at `t`, holding the end samples constant outside the grid.
    pub fn eval_clamped(&self, t: f64) -> f64 {
        let n = self.values.len();
        if t <= self.grid.start() {
            return self.values[0];
        }
        if t >= self.grid.end() {
            return self.values[n - 1];
        }
        let h = self.grid.spacing();
        let x = (t - self.grid.start()) / h;
        let nearest = x.round();
        if (x - nearest).abs() < 1e-9 {
            return self.values[(nearest as usize).min(n - 1)];
        }
        let k = (x.floor() as usize).min(n - 2);
        let s = x - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1
    }
}

fn limited_slopes(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    if n == 2 {
        let d = (y[1] - y[0]) / h;
        return vec![d, d];
    }
    if n < 5 {
        m[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
        for i in 1..n - 1 {
            m[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
        }
        m[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    } else {
        m[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
        m[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
        for i in 2..n - 2 {
            m[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
        }
        m[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5])
            / (12.0 * h);
        m[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4]
            + 3.0 * y[n - 5])
            / (12.0 * h);
    }

    let secant = |i: usize| (y[i + 1] - y[i]) / h;
    for i in 0..n {
        let left = if i > 0 { Some(secant(i - 1)) } else { None };
        let right = if i + 1 < n { Some(secant(i)) } else { None };
        let clip = |m: f64, d: f64, bound: f64| d.signum() * (m * d.signum()).clamp(0.0, bound);
        m[i] = match (left, right) {
            (Some(a), Some(b)) if a == 0.0 && b == 0.0 => 0.0,
            // one flat side: an extremum straddles the flat interval only if
            // the secant beyond it turns back
            (Some(a), Some(b)) if a == 0.0 || b == 0.0 => {
                let (near, far) = if b == 0.0 {
                    (a, (i + 2 < n).then(|| secant(i + 1)))
                } else {
                    (b, (i >= 2).then(|| secant(i - 2)))
                };
                match far {
                    Some(f) if f * near < 0.0 => m[i],
                    _ => 0.0,
                }
            }
            (Some(a), Some(b)) if a * b > 0.0 => clip(m[i], a, 3.0 * a.abs().min(b.abs())),
            // sampled extremum
            (Some(_), Some(_)) => m[i],
            (None, Some(d)) | (Some(d), None) if d == 0.0 => 0.0,
            (None, Some(d)) | (Some(d), None) => clip(m[i], d, 3.0 * d.abs()),
            (None, None) => 0.0,
        };
    }
    m
}

/// Pair of interpolants for the real and imaginary parts of complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCubic {
    re: MonotoneCubic,
    im: MonotoneCubic,
}

impl ComplexCubic {
    pub fn new(grid: TimeGrid, values: &[C64]) -> Result<Self> {
        Ok(Self {
            re: MonotoneCubic::new(grid, values.iter().map(|z| z.re).collect())?,
            im: MonotoneCubic::new(grid, values.iter().map(|z| z.im).collect())?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<C64> {
        Ok(C64::new(self.re.eval(t)?, self.im.eval(t)?))
    }

    pub fn eval_clamped(&self, t: f64) -> C64 {
        C64::new(self.re.eval_clamped(t), self.im.eval_clamped(t))
    }
}

/// Values that can be sampled at arbitrary times inside their grid.
pub trait Interpolate {
    type Output;

    fn interpolate(&self, t: f64) -> Result<Self::Output>;
}
