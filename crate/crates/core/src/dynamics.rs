//! Four-level driven, decaying atom and its dark-state reduction.
//!
//! The atom-only amplitudes ψ = (c_g1, c_g2, c_h, c_r) obey
//!
//! ```text
//! i dψ/dt = H(t) ψ − |r⟩ D(t)
//! H = −iΓ/2 |r⟩⟨r| − ( e^{iΔ₁(t−t0)} Ω₁/2 |g₁⟩⟨h| + e^{iΔ₂(t−t0)} Ω₂/2 |r⟩⟨h| + h.c. )
//! ```
//!
//! in the interaction picture with ħ = 1, where D(t) is the field of an
//! incoming photon at the atom in amplitude units. Amplitude leaving through
//! the anti-Hermitian term is the emitted photon; |g₂⟩ is never fed
//! coherently.

use num_complex::Complex64 as C64;

use crate::envelope::PhotonEnvelope;
use crate::error::{Error, Result};
use crate::grid::{cumulative_simpson, TimeGrid};
use crate::interp::ComplexCubic;
use crate::ode::{integrate_dopri5, Tolerances};
use crate::params::PhysicalParams;
use crate::pulse::PulseSchedule;
use crate::state::{AtomState, G1, H, R};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Inhomogeneous source acting on |r⟩, zero outside its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveTerm {
    grid: TimeGrid,
    values: Vec<C64>,
    interp: Option<ComplexCubic>,
}

impl DriveTerm {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        let interp = if values.iter().all(|z| *z == C64::default()) {
            if values.len() != grid.len() {
                return Err(Error::domain("drive samples do not match the grid"));
            }
            None
        } else {
            Some(ComplexCubic::new(grid, &values)?)
        };
        Ok(Self {
            grid,
            values,
            interp,
        })
    }

    /// Vacuum input.
    pub fn zero(grid: TimeGrid) -> Self {
        Self {
            grid,
            values: vec![C64::default(); grid.len()],
            interp: None,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.interp.is_none()
    }

    /// D(t); exactly zero outside the grid.
    pub fn at(&self, t: f64) -> C64 {
        match &self.interp {
            Some(interp) if self.grid.contains(t) => interp.eval_clamped(t),
            _ => C64::default(),
        }
    }
}

/// Drive seen by a receiver: D(t) = α Γ f(t − τ).
pub fn drive_from_envelope(
    envelope: &PhotonEnvelope,
    alpha: C64,
    tau: f64,
    gamma: f64,
) -> Result<DriveTerm> {
    if alpha.norm().is_nan() || alpha.norm() > 1.0 + 1e-12 {
        return Err(Error::domain(format!(
            "|alpha| = {} exceeds one",
            alpha.norm()
        )));
    }
    let grid = envelope.grid().shifted(tau);
    if alpha == C64::default() {
        return Ok(DriveTerm::zero(grid));
    }
    DriveTerm::new(
        grid,
        envelope
            .values()
            .iter()
            .map(|f| alpha * gamma * f)
            .collect(),
    )
}

/// Atom-only amplitudes on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<AtomState>,
}

impl Trajectory {
    /// |c|² for (g₁, g₂, h, r) at every node.
    pub fn populations(&self) -> Vec<[f64; 4]> {
        self.states.iter().map(AtomState::populations).collect()
    }

    pub fn norm_sqr(&self) -> Vec<f64> {
        self.states.iter().map(AtomState::norm_sqr).collect()
    }

    pub fn final_state(&self) -> AtomState {
        *self
            .states
            .last()
            .expect("trajectory has at least two nodes")
    }

    pub fn max_population(&self, level: usize) -> f64 {
        self.populations().iter().fold(0.0, |m, p| m.max(p[level]))
    }

    /// ||ψ(t)||² + Γ∫_{t0}^{t}|c_r|² at every node; identically one for an
    /// undriven emitter that starts normalized.
    pub fn norm_balance(&self, gamma: f64) -> Vec<f64> {
        let pr: Vec<f64> = self.states.iter().map(|s| s.c_r.norm_sqr()).collect();
        let emitted = cumulative_simpson(&pr, self.grid.spacing());
        self.norm_sqr()
            .iter()
            .zip(emitted)
            .map(|(n, e)| n + gamma * e)
            .collect()
    }
}

/// H/ħ at time `t` in the basis (g₁, g₂, h, r).
pub fn build_effective_hamiltonian(
    t: f64,
    params: &PhysicalParams,
    schedule: &PulseSchedule,
) -> [[C64; 4]; 4] {
    let (omega1, omega2) = schedule.rabi_at(t);
    let elapsed = t - schedule.grid().start();
    let c1 = -C64::from_polar(0.5 * omega1, params.delta1 * elapsed);
    let c2 = -C64::from_polar(0.5 * omega2, params.delta2 * elapsed);
    let mut m = [[C64::default(); 4]; 4];
    m[R][R] = C64::new(0.0, -0.5 * params.gamma);
    m[G1][H] = c1;
    m[H][G1] = c1.conj();
    m[R][H] = c2;
    m[H][R] = c2.conj();
    m
}

/// Solves the four-level model on `grid` with adaptive Dormand–Prince steps.
pub fn integrate_full(
    initial: AtomState,
    params: &PhysicalParams,
    schedule: &PulseSchedule,
    drive: &DriveTerm,
    grid: &TimeGrid,
    tol: &Tolerances,
) -> Result<Trajectory> {
    if initial.norm_sqr() > 1.0 + 1e-9 {
        return Err(Error::domain(format!(
            "initial state norm {} exceeds one",
            initial.norm_sqr()
        )));
    }
    let rhs = |t: f64, y: &[C64; 4]| {
        let h = build_effective_hamiltonian(t, params, schedule);
        let mut dy = [C64::default(); 4];
        for (i, row) in h.iter().enumerate() {
            let hy: C64 = row.iter().zip(y).map(|(a, b)| a * b).sum();
            dy[i] = -I * hy;
        }
        dy[R] += I * drive.at(t);
        dy
    };
    let states = integrate_dopri5(rhs, initial.to_array(), grid, tol)?;
    Ok(Trajectory {
        grid: *grid,
        states: states.into_iter().map(AtomState::from_array).collect(),
    })
}

/// Dark-state amplitude c(t) from
/// dc/dt = −(Γ/2) sin²θ c − i sin θ D(t), on the schedule grid.
///
/// The reduction assumes Δ₁ = Δ₂ and adiabatic following.
pub fn integrate_adiabatic(
    schedule: &PulseSchedule,
    gamma: f64,
    drive: &DriveTerm,
    initial: C64,
    tol: &Tolerances,
) -> Result<Vec<C64>> {
    let rhs = |t: f64, y: &[C64; 1]| {
        let s = schedule.theta_at(t).sin();
        [y[0] * (-0.5 * gamma * s * s) - I * s * drive.at(t)]
    };
    let out = integrate_dopri5(rhs, [initial], schedule.grid(), tol)?;
    Ok(out.into_iter().map(|y| y[0]).collect())
}

/// |r⟩ amplitude of a full-model emission run, which sources the photon.
pub fn emitted_envelope(traj: &Trajectory) -> Result<PhotonEnvelope> {
    PhotonEnvelope::new(traj.grid, traj.states.iter().map(|s| s.c_r).collect())
}

/// ⟨r|ψ⟩ = −c(t) sin θ(t) along the dark state.
pub fn emitted_envelope_adiabatic(c: &[C64], schedule: &PulseSchedule) -> Result<PhotonEnvelope> {
    if c.len() != schedule.grid().len() {
        return Err(Error::domain(
            "amplitude series does not match the schedule grid",
        ));
    }
    let values = c
        .iter()
        .zip(schedule.theta())
        .map(|(c, th)| -c * th.sin())
        .collect();
    PhotonEnvelope::new(*schedule.grid(), values)
}
