use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::{simpson, TimeGrid};
use crate::interp::{ComplexCubic, Interpolate};

/// Absolute slack allowed on Γ∫|f|²dt above one.
pub const EMISSION_QUADRATURE_TOL: f64 = 1e-6;

/// Complex single-photon envelope sampled on a time grid.
///
/// Samples are the |r⟩ amplitude that sources the field, so Γ∫|f|²dt is the
/// probability that the photon exists at all.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonEnvelope {
    grid: TimeGrid,
    values: Vec<C64>,
    interp: ComplexCubic,
}

impl PhotonEnvelope {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        let interp = ComplexCubic::new(grid, &values)?;
        Ok(Self {
            grid,
            values,
            interp,
        })
    }

    pub fn from_real(grid: TimeGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn zero(grid: TimeGrid) -> Self {
        Self::new(grid, vec![C64::new(0.0, 0.0); grid.len()]).expect("zero samples are finite")
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Γ∫|f|²dt over the grid.
    pub fn emission_probability(&self, gamma: f64) -> f64 {
        gamma * simpson(&self.intensities(), self.grid.spacing())
    }

    /// Checks that the envelope carries at most one photon.
    pub fn validate(&self, gamma: f64) -> Result<()> {
        let p = self.emission_probability(gamma);
        if p > 1.0 + EMISSION_QUADRATURE_TOL {
            return Err(Error::domain(format!(
                "envelope carries total emission probability {p} > 1"
            )));
        }
        Ok(())
    }

    /// Clamped evaluation; holds the end samples outside the grid.
    pub fn at_clamped(&self, t: f64) -> C64 {
        self.interp.eval_clamped(t)
    }

    /// Envelope multiplied by a complex constant.
    pub fn scaled(&self, factor: C64) -> Self {
        Self::new(self.grid, self.values.iter().map(|z| z * factor).collect())
            .expect("scaled finite samples stay finite")
    }
}

impl Interpolate for PhotonEnvelope {
    type Output = C64;

    fn interpolate(&self, t: f64) -> Result<C64> {
        self.interp.eval(t)
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn over_normalized_envelope_rejected() {
        let grid = TimeGrid::new(0.0, 10.0, 101).unwrap();
        let env = PhotonEnvelope::from_real(grid, &vec![1.0; 101]).unwrap();
        assert!((env.emission_probability(1.0) - 10.0).abs() < 1e-12);
        assert!(env.validate(1.0).is_err());
        assert!(env.validate(0.05).is_ok());
    }

    #[test]
    fn interpolation_is_exact_at_nodes() {
        let grid = TimeGrid::new(0.0, 1.0, 11).unwrap();
        let vals: Vec<C64> = (0..11)
            .map(|k| C64::new(k as f64, -(k as f64) * 0.5))
            .collect();
        let env = PhotonEnvelope::new(grid, vals.clone()).unwrap();
        for k in 0..11 {
            assert_eq!(env.interpolate(grid.time(k)).unwrap(), vals[k]);
        }
        assert!(env.interpolate(1.2).is_err());
    }
}
