//! Inverse pulse design: from a target emission envelope to the STIRAP
//! mixing angle θ(t) and the Rabi pair Ω₁ = Ω sin θ, Ω₂ = Ω cos θ.
//!
//! Along the dark state cos θ|g₁⟩ − sin θ|r⟩ the |r⟩ amplitude is
//! −c(t) sin θ(t) with c(t) = exp(−(Γ/2)∫ sin²θ), so a target envelope f is
//! produced by choosing
//!
//! ```text
//! sin θ(t) = |f(t)| / sqrt(1 − Γ ∫_{t0}^{t} |f|² dt')
//! ```
//!
//! The overall minus sign is carried as a constant global phase: targets are
//! handled through |f| and the emitted envelope is −c sin θ.

use std::f64::consts::{FRAC_PI_2, PI};

use log::warn;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::envelope::{PhotonEnvelope, EMISSION_QUADRATURE_TOL};
use crate::error::{Error, Result};
use crate::grid::{cumulative_simpson, reverse_cumulative_simpson, simpson, TimeGrid};
use crate::interp::{Interpolate, MonotoneCubic};
use crate::params::PhysicalParams;

/// Sampled mixing angle θ(t) together with the total Rabi amplitude Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    grid: TimeGrid,
    theta: MonotoneCubic,
    omega: f64,
}

impl PulseSchedule {
    pub fn new(grid: TimeGrid, theta: Vec<f64>, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::domain(format!(
                "Rabi amplitude must be >= 0, got {omega}"
            )));
        }
        if let Some((k, th)) = theta
            .iter()
            .enumerate()
            .find(|(_, th)| !(**th >= 0.0 && **th <= FRAC_PI_2))
        {
            return Err(Error::domain(format!(
                "mixing angle {th} at t = {} outside [0, pi/2]",
                grid.time(k.min(grid.len() - 1))
            )));
        }
        Ok(Self {
            grid,
            theta: MonotoneCubic::new(grid, theta)?,
            omega,
        })
    }

    /// θ held at `theta` over the whole grid.
    pub fn constant(grid: TimeGrid, theta: f64, omega: f64) -> Result<Self> {
        Self::new(grid, vec![theta; grid.len()], omega)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> &[f64] {
        self.theta.values()
    }

    /// Same angles with a different total Rabi amplitude.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.grid, self.theta().to_vec(), omega)
    }

    /// θ(t), holding the boundary angles outside the grid (lasers keep their
    /// initial and final ratio before and after the schedule).
    pub fn theta_at(&self, t: f64) -> f64 {
        self.theta.eval_clamped(t).clamp(0.0, FRAC_PI_2)
    }

    /// (Ω₁(t), Ω₂(t)).
    pub fn rabi_at(&self, t: f64) -> (f64, f64) {
        let (s, c) = self.theta_at(t).sin_cos();
        (self.omega * s, self.omega * c)
    }

    /// The schedule delayed by `delay` on the same grid: θ'(t) = θ(t − delay).
    pub fn delayed(&self, delay: f64) -> Result<Self> {
        let theta = self
            .grid
            .times()
            .iter()
            .map(|&t| self.theta_at(t - delay))
            .collect();
        Self::new(self.grid, theta, self.omega)
    }
}

impl Interpolate for PulseSchedule {
    type Output = f64;

    fn interpolate(&self, t: f64) -> Result<f64> {
        self.theta.eval(t)
    }
}

/// Tuning knobs of [`invert_envelope_to_theta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionOptions {
    /// Once sqrt(1 − Γ∫|f|²) falls below this floor the schedule is frozen at
    /// its last angle for the rest of the grid.
    pub denominator_floor: f64,
    /// sin θ ratios within this distance of one are taken as exactly one;
    /// larger excursions above one are infeasible.
    pub unit_tolerance: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            denominator_floor: 1e-6,
            unit_tolerance: 1e-8,
        }
    }
}

/// Gaussian |r⟩ amplitude (2/(πΓ²σ²))^{1/4} exp(−(t_max − t)²/σ²) sampled on
/// `grid`. Normalized so that Γ∫|f|² = 1 over the whole real line.
pub fn gaussian_target(params: &PhysicalParams, grid: &TimeGrid) -> Result<PhotonEnvelope> {
    let PhysicalParams {
        gamma,
        sigma,
        t0,
        t_max,
        ..
    } = *params;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if sigma * gamma < 5.0 {
        warn!(
            "sigma*gamma = {} is small; the emission may not follow the target",
            sigma * gamma
        );
    }
    if (t_max - t0) / sigma < 2.0 {
        warn!(
            "(t_max - t0)/sigma = {} truncates the rising edge",
            (t_max - t0) / sigma
        );
    }
    let amplitude = (2.0 / (PI * gamma * gamma * sigma * sigma)).powf(0.25);
    let values: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| amplitude * (-(t_max - t).powi(2) / (sigma * sigma)).exp())
        .collect();
    PhotonEnvelope::from_real(*grid, &values)
}

/// Mixing angle that makes the dark-state emitter radiate `target`.
pub fn invert_envelope_to_theta(
    target: &PhotonEnvelope,
    gamma: f64,
    omega: f64,
    opts: &InversionOptions,
) -> Result<PulseSchedule> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let grid = *target.grid();
    let h = grid.spacing();
    let intensity = target.intensities();
    let magnitude: Vec<f64> = target.values().iter().map(|z| z.norm()).collect();

    // Remaining emission 1 − Γ∫_{t0}^{t}|f|², assembled from the tail
    // integral so it keeps relative accuracy where it becomes small.
    let total = gamma * simpson(&intensity, h);
    let beyond_grid = 1.0 - total;
    if beyond_grid < -EMISSION_QUADRATURE_TOL {
        let running = cumulative_simpson(&intensity, h);
        let k = running
            .iter()
            .position(|&q| gamma * q > 1.0)
            .unwrap_or(grid.len() - 1);
        return Err(Error::Infeasible {
            time: grid.time(k),
            ratio: f64::INFINITY,
        });
    }
    let beyond_grid = beyond_grid.max(0.0);
    let tail = reverse_cumulative_simpson(&intensity, h);

    let mut theta = Vec::with_capacity(grid.len());
    let mut frozen: Option<f64> = None;
    for k in 0..grid.len() {
        if let Some(th) = frozen {
            theta.push(th);
            continue;
        }
        let remaining = beyond_grid + gamma * tail[k];
        let denominator = remaining.max(0.0).sqrt();
        if denominator < opts.denominator_floor {
            let th = theta.last().copied().unwrap_or(0.0);
            frozen = Some(th);
            theta.push(th);
            continue;
        }
        let ratio = magnitude[k] / denominator;
        let th = if ratio > 1.0 + opts.unit_tolerance {
            return Err(Error::Infeasible {
                time: grid.time(k),
                ratio,
            });
        } else if ratio >= 1.0 - opts.unit_tolerance {
            FRAC_PI_2
        } else {
            ratio.asin()
        };
        theta.push(th);
    }
    PulseSchedule::new(grid, theta, omega)
}

/// Gaussian target and its inverted schedule for `params`.
pub fn design_emission_schedule(
    params: &PhysicalParams,
    grid: &TimeGrid,
    opts: &InversionOptions,
) -> Result<(PhotonEnvelope, PulseSchedule)> {
    let target = gaussian_target(params, grid)?;
    let schedule = invert_envelope_to_theta(&target, params.gamma, params.omega, opts)?;
    Ok((target, schedule))
}

/// Dark-state amplitude c(t) = exp(−(Γ/2)∫_{t0}^{t} sin²θ dt') on the
/// schedule grid, by cumulative Simpson quadrature.
pub fn closed_form_c(schedule: &PulseSchedule, gamma: f64) -> Vec<C64> {
    let sin_sq: Vec<f64> = schedule.theta().iter().map(|th| th.sin().powi(2)).collect();
    cumulative_simpson(&sin_sq, schedule.grid().spacing())
        .into_iter()
        .map(|q| C64::new((-0.5 * gamma * q).exp(), 0.0))
        .collect()
}

/// Ω₁(t) = Ω sin θ(t) and Ω₂(t) = Ω cos θ(t) at the schedule nodes.
pub fn theta_to_rabi(schedule: &PulseSchedule) -> (Vec<f64>, Vec<f64>) {
    schedule
        .theta()
        .iter()
        .map(|th| {
            let (s, c) = th.sin_cos();
            (schedule.omega() * s, schedule.omega() * c)
        })
        .unzip()
}

/// Receiver schedule: the emitter's angle run backwards in time about the
/// arrival peak, on the emitter grid delayed by `tau`.
///
/// With `arrival_center = t_max + tau` the receiver angle at time t is the
/// emitter angle at `t_max − (t − arrival_center)`, so the arrival peak sees
/// the emitter's peak angle, the start of the receiver window sees the end of
/// the emission and vice versa.
pub fn mirror_schedule_for_absorption(
    emit: &PulseSchedule,
    tau: f64,
    arrival_center: f64,
) -> Result<PulseSchedule> {
    let grid = emit.grid().shifted(tau);
    let pivot = 2.0 * arrival_center - tau;
    let emit_grid = emit.grid();
    let reflected_start = pivot - emit_grid.end() - tau;
    let reflected = TimeGrid::new(
        reflected_start,
        reflected_start + emit_grid.span(),
        grid.len(),
    )?;
    let theta: Vec<f64> = if reflected.matches(emit_grid, 1e-9) {
        emit.theta().iter().rev().copied().collect()
    } else {
        grid.times()
            .iter()
            .map(|&t| emit.theta_at(pivot - t))
            .collect()
    };
    PulseSchedule::new(grid, theta, emit.omega())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticityReport {
    /// max |θ̇| over the grid.
    pub max_theta_dot: f64,
    /// 2Ω²/|Δ + √(Δ² + 4Ω²)|, smallest over Δ₁ and Δ₂.
    pub bound_plus: f64,
    /// 2Ω²/|Δ − √(Δ² + 4Ω²)|, smallest over Δ₁ and Δ₂.
    pub bound_minus: f64,
    /// max(|θ̇|, Γ) / min(bound_plus, bound_minus).
    pub margin_ratio: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// θ̇ by second-order differences: central inside, one-sided at the ends.
pub fn theta_rate(schedule: &PulseSchedule) -> Vec<f64> {
    let th = schedule.theta();
    let n = th.len();
    let h = schedule.grid().spacing();
    if n == 2 {
        let d = (th[1] - th[0]) / h;
        return vec![d, d];
    }
    (0..n)
        .map(|k| {
            if k == 0 {
                (4.0 * (th[1] - th[0]) - (th[2] - th[0])) / (2.0 * h)
            } else if k == n - 1 {
                (4.0 * (th[n - 1] - th[n - 2]) - (th[n - 1] - th[n - 3])) / (2.0 * h)
            } else {
                (th[k + 1] - th[k - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Compares the pulse speed and the decay rate with the dark-state gap.
///
/// Passes when `margin_ratio <= threshold`; Ω = 0 never passes.
pub fn adiabaticity_check(
    schedule: &PulseSchedule,
    params: &PhysicalParams,
    threshold: f64,
) -> AdiabaticityReport {
    let max_theta_dot = theta_rate(schedule)
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()));
    let omega = schedule.omega();
    if omega == 0.0 {
        return AdiabaticityReport {
            max_theta_dot,
            bound_plus: 0.0,
            bound_minus: 0.0,
            margin_ratio: f64::INFINITY,
            threshold,
            passes: false,
        };
    }
    let bound = |delta: f64, sign: f64| {
        2.0 * omega * omega / (delta + sign * (delta * delta + 4.0 * omega * omega).sqrt()).abs()
    };
    let bound_plus = bound(params.delta1, 1.0).min(bound(params.delta2, 1.0));
    let bound_minus = bound(params.delta1, -1.0).min(bound(params.delta2, -1.0));
    let margin_ratio = max_theta_dot.max(params.gamma) / bound_plus.min(bound_minus);
    AdiabaticityReport {
        max_theta_dot,
        bound_plus,
        bound_minus,
        margin_ratio,
        threshold,
        passes: margin_ratio <= threshold,
    }
}
