use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Node count of the default simulation grid.
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Rates, detunings and timing of one experiment, in units with ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Decay rate of |r⟩ into |g₂⟩.
    pub gamma: f64,
    /// Total Rabi amplitude Ω.
    pub omega: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Width of the Gaussian target envelope.
    pub sigma: f64,
    pub t0: f64,
    /// Peak time of the target envelope.
    pub t_max: f64,
    pub t_end: f64,
}

impl PhysicalParams {
    /// σΓ = 10, Γ(t_max − t0) = 25, Δ₁ = Δ₂ = 0, with the window closed
    /// symmetrically at t_end = 2 t_max − t0. Units of 1/Γ.
    pub fn reference(omega_over_gamma: f64) -> Self {
        Self {
            gamma: 1.0,
            omega: omega_over_gamma,
            delta1: 0.0,
            delta2: 0.0,
            sigma: 10.0,
            t0: 0.0,
            t_max: 25.0,
            t_end: 50.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.gamma,
            self.omega,
            self.delta1,
            self.delta2,
            self.sigma,
            self.t0,
            self.t_max,
            self.t_end,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("physical parameters must be finite"));
        }
        if self.gamma <= 0.0 {
            return Err(Error::domain(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.omega < 0.0 {
            return Err(Error::domain(format!(
                "omega must be non-negative, got {}",
                self.omega
            )));
        }
        if self.sigma <= 0.0 {
            return Err(Error::domain(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.t0 < self.t_max && self.t_max < self.t_end) {
            return Err(Error::domain(format!(
                "need t0 < t_max < t_end, got {} / {} / {}",
                self.t0, self.t_max, self.t_end
            )));
        }
        Ok(())
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }

    /// Same physics in a time unit `factor` times shorter: rates are
    /// multiplied and times divided by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            gamma: self.gamma * factor,
            omega: self.omega * factor,
            delta1: self.delta1 * factor,
            delta2: self.delta2 * factor,
            sigma: self.sigma / factor,
            t0: self.t0 / factor,
            t_max: self.t_max / factor,
            t_end: self.t_end / factor,
        }
    }

    /// Uniform grid over [t0, t_end].
    pub fn grid(&self, n_points: usize) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.t_end, n_points)
    }
}
