//! Emission at one atom, a lossy delayed channel, and STIRAP-assisted
//! absorption at a second atom; success probabilities and fidelities of the
//! two qubit-transfer protocols built on that chain.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    drive_from_envelope, emitted_envelope, integrate_full, DriveTerm, Trajectory,
};
use crate::envelope::PhotonEnvelope;
use crate::error::{Error, Result};
use crate::ode::Tolerances;
use crate::params::{PhysicalParams, DEFAULT_GRID_POINTS};
use crate::pulse::{
    design_emission_schedule, mirror_schedule_for_absorption, InversionOptions, PulseSchedule,
};
use crate::state::{AtomState, H};

/// Free-space link: complex transmission amplitude and propagation delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub alpha: C64,
    pub tau: f64,
}

impl ChannelModel {
    pub fn new(alpha: C64, tau: f64) -> Result<Self> {
        let ch = Self { alpha, tau };
        ch.validate()?;
        Ok(ch)
    }

    /// Lossless, in phase, no delay.
    pub fn ideal() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            tau: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.norm().is_nan() || self.alpha.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "|alpha| = {} exceeds one; the channel cannot amplify",
                self.alpha.norm()
            )));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::domain(format!(
                "delay must be non-negative, got {}",
                self.tau
            )));
        }
        Ok(())
    }

    pub fn loss_probability(&self) -> f64 {
        1.0 - self.alpha.norm_sqr()
    }

    pub fn with_alpha(self, alpha: C64) -> Self {
        Self { alpha, ..self }
    }
}

/// a|0⟩ + b|1⟩ on the logical basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub a: C64,
    pub b: C64,
}

impl QubitState {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm_sq = a.norm_sqr() + b.norm_sqr();
        if norm_sq.is_nan() || (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidQubit { norm_sq });
        }
        Ok(Self { a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchProbabilities {
    /// Photon emitted, transmitted and absorbed by the receiver.
    pub transmitted_absorbed: f64,
    /// Photon emitted and transmitted but scattered instead of absorbed.
    pub transmitted_not_absorbed: f64,
    /// Photon emitted and lost in the channel.
    pub lost: f64,
    /// No photon left the emitter.
    pub no_photon: f64,
}

impl BranchProbabilities {
    pub fn total(&self) -> f64 {
        self.transmitted_absorbed + self.transmitted_not_absorbed + self.lost + self.no_photon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferOutcome {
    pub success_probability: f64,
    pub fidelity: f64,
    pub branch_probabilities: BranchProbabilities,
    /// Whether the receiver can tell that the transfer failed.
    pub heralded: bool,
}

/// Numerical settings shared by the chain simulations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    pub n_points: usize,
    pub inversion: InversionOptions,
    /// Extra delay of the receiver pulses relative to the mirrored schedule.
    pub receiver_shift: f64,
    pub tolerances: Tolerances,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            n_points: DEFAULT_GRID_POINTS,
            inversion: InversionOptions::default(),
            receiver_shift: 0.0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    pub trajectory: Trajectory,
    pub envelope: PhotonEnvelope,
    /// 1 − ||ψ(t_end)||².
    pub emission_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Absorption {
    pub trajectory: Trajectory,
    /// |⟨g₁|ψ(t_end)⟩|² of the receiver.
    pub success_probability: f64,
}

/// Readout: emitter starts in |g₁⟩ with the field in vacuum.
pub fn simulate_emission(
    params: &PhysicalParams,
    schedule: &PulseSchedule,
    tol: &Tolerances,
) -> Result<Emission> {
    let grid = *schedule.grid();
    let trajectory = integrate_full(
        AtomState::g1(),
        params,
        schedule,
        &DriveTerm::zero(grid),
        &grid,
        tol,
    )?;
    let envelope = emitted_envelope(&trajectory)?;
    let emission_probability = 1.0 - trajectory.final_state().norm_sqr();
    Ok(Emission {
        trajectory,
        envelope,
        emission_probability,
    })
}

/// Retrieval: receiver waits in |g₂⟩ (no atom-only amplitude) while the
/// emitted photon arrives through `channel`.
pub fn simulate_absorption(
    envelope: &PhotonEnvelope,
    channel: &ChannelModel,
    params: &PhysicalParams,
    schedule_abs: &PulseSchedule,
    tol: &Tolerances,
) -> Result<Absorption> {
    channel.validate()?;
    let drive = drive_from_envelope(envelope, channel.alpha, channel.tau, params.gamma)?;
    let grid = *schedule_abs.grid();
    let trajectory = integrate_full(
        AtomState::vacant(),
        params,
        schedule_abs,
        &drive,
        &grid,
        tol,
    )?;
    let success_probability = trajectory.final_state().c_g1.norm_sqr();
    Ok(Absorption {
        trajectory,
        success_probability,
    })
}

/// Emitter schedule mirrored about the arrival peak t_max + τ, optionally
/// delayed by `shift`.
pub fn receiver_schedule(
    emit: &PulseSchedule,
    params: &PhysicalParams,
    tau: f64,
    shift: f64,
) -> Result<PulseSchedule> {
    let mirrored = mirror_schedule_for_absorption(emit, tau, params.t_max + tau)?;
    if shift == 0.0 {
        Ok(mirrored)
    } else {
        mirrored.delayed(shift)
    }
}

/// One emission → channel → absorption run, reduced to what the protocols
/// need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    pub emission_probability: f64,
    /// Receiver ⟨g₁|ψ(t_end)⟩ for a lossless, in-phase link. The receiver
    /// amplitude is linear in α, so any other link gives α times this.
    pub receiver_amplitude: C64,
    pub max_h_emitter: f64,
    pub max_h_receiver: f64,
}

impl ChainResult {
    /// Absorption probability of a photon that is emitted and transmitted
    /// without loss (includes the emission inefficiency).
    pub fn chain_probability(&self) -> f64 {
        self.receiver_amplitude.norm_sqr()
    }
}

struct ChainRun {
    emission: Emission,
    absorption: Absorption,
}

fn run_chain_with(
    params: &PhysicalParams,
    channel: &ChannelModel,
    opts: &ChainOptions,
) -> Result<ChainRun> {
    params.validate()?;
    channel.validate()?;
    let grid = params.grid(opts.n_points)?;
    let (_, emit) = design_emission_schedule(params, &grid, &opts.inversion)?;
    let emission = simulate_emission(params, &emit, &opts.tolerances)?;
    let receiver = receiver_schedule(&emit, params, channel.tau, opts.receiver_shift)?;
    let absorption = simulate_absorption(
        &emission.envelope,
        channel,
        params,
        &receiver,
        &opts.tolerances,
    )?;
    Ok(ChainRun {
        emission,
        absorption,
    })
}

/// Runs the chain with a unit-amplitude link of delay `tau`.
pub fn run_chain(params: &PhysicalParams, tau: f64, opts: &ChainOptions) -> Result<ChainResult> {
    let run = run_chain_with(
        params,
        &ChannelModel {
            alpha: C64::new(1.0, 0.0),
            tau,
        },
        opts,
    )?;
    Ok(ChainResult {
        emission_probability: run.emission.emission_probability,
        receiver_amplitude: run.absorption.trajectory.final_state().c_g1,
        max_h_emitter: run.emission.trajectory.max_population(H),
        max_h_receiver: run.absorption.trajectory.max_population(H),
    })
}

fn branches(
    weight_photon: f64,
    channel: &ChannelModel,
    chain: &ChainResult,
) -> BranchProbabilities {
    let p_emit = chain.emission_probability;
    let p_chain = chain.chain_probability();
    let t = channel.alpha.norm_sqr();
    let transmitted_absorbed = weight_photon * t * p_chain;
    let transmitted_not_absorbed = (weight_photon * t * (p_emit - p_chain)).max(0.0);
    let lost = weight_photon * p_emit * (1.0 - t);
    BranchProbabilities {
        transmitted_absorbed,
        transmitted_not_absorbed,
        lost,
        no_photon: 1.0 - transmitted_absorbed - transmitted_not_absorbed - lost,
    }
}

/// Qubit on {|g₁⟩, |g₂⟩}: the |g₁⟩ part becomes a photon, the |g₂⟩ part
/// stays dark. Every failure leaves the receiver in |g₂⟩ with an orthogonal
/// environment record, so failures are not heralded and cost fidelity.
///
/// The receiver undoes the fixed phase of the lossless chain once; the phase
/// of α is not compensated.
pub fn simple_outcome(
    qubit: &QubitState,
    channel: &ChannelModel,
    chain: &ChainResult,
) -> TransferOutcome {
    let p_chain = chain.chain_probability();
    let amplitude = channel.alpha * p_chain.sqrt();
    let branch_probabilities = branches(qubit.a.norm_sqr(), channel, chain);

    // receiver density matrix on (g₁, g₂)
    let coherent = [qubit.a * amplitude, qubit.b];
    let incoherent_g2 = qubit.a.norm_sqr() * (1.0 - amplitude.norm_sqr());
    let mut rho = [[C64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            rho[i][j] = coherent[i] * coherent[j].conj();
        }
    }
    rho[1][1] += incoherent_g2;
    let target = [qubit.a, qubit.b];
    let mut fidelity = C64::default();
    for i in 0..2 {
        for j in 0..2 {
            fidelity += target[i].conj() * rho[i][j] * target[j];
        }
    }

    TransferOutcome {
        success_probability: channel.alpha.norm_sqr() * p_chain,
        fidelity: fidelity.re.clamp(0.0, 1.0),
        branch_probabilities,
        heralded: false,
    }
}

/// Qubit in two Zeeman-like sublevels, each read out into its own photon
/// polarization. Both components pass the same scalar chain, so a failure
/// (no excitation at the receiver) is detectable and the state kept on
/// success is the input up to a global phase.
///
/// `fidelity` is conditional on success; with zero success probability there
/// is nothing to condition on and it is reported as 0.
pub fn polarization_outcome(
    qubit: &QubitState,
    channel: &ChannelModel,
    chain: &ChainResult,
) -> TransferOutcome {
    let component = channel.alpha * chain.receiver_amplitude;
    let kept = [qubit.a * component, qubit.b * component];
    let success_probability = kept.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let fidelity = if success_probability > 0.0 {
        let overlap = qubit.a.conj() * kept[0] + qubit.b.conj() * kept[1];
        (overlap.norm_sqr() / success_probability).clamp(0.0, 1.0)
    } else {
        0.0
    };
    TransferOutcome {
        success_probability,
        fidelity,
        branch_probabilities: branches(1.0, channel, chain),
        heralded: true,
    }
}

pub fn run_state_transfer_simple(
    qubit: &QubitState,
    params: &PhysicalParams,
    channel: &ChannelModel,
    opts: &ChainOptions,
) -> Result<TransferOutcome> {
    QubitState::new(qubit.a, qubit.b)?;
    channel.validate()?;
    let chain = run_chain(params, channel.tau, opts)?;
    Ok(simple_outcome(qubit, channel, &chain))
}

pub fn run_state_transfer_polarization(
    qubit: &QubitState,
    params: &PhysicalParams,
    channel: &ChannelModel,
    opts: &ChainOptions,
) -> Result<TransferOutcome> {
    QubitState::new(qubit.a, qubit.b)?;
    channel.validate()?;
    let chain = run_chain(params, channel.tau, opts)?;
    Ok(polarization_outcome(qubit, channel, &chain))
}

/// Absorption success |⟨g₁|ψ(t_end)⟩|² through `channel` for each Ω, with
/// emitter and receiver driven at the same Ω. Points run in parallel; the
/// output order follows `omega_values`.
pub fn sweep_omega(
    omega_values: &[f64],
    params: &PhysicalParams,
    channel: &ChannelModel,
    opts: &ChainOptions,
) -> Result<Vec<(f64, f64)>> {
    omega_values
        .par_iter()
        .map(|&omega| {
            let run = run_chain_with(&params.with_omega(omega), channel, opts)?;
            Ok((omega, run.absorption.success_probability))
        })
        .collect()
}

/// max_t |c_h|² of the emitter for each Ω.
pub fn h_population_scan(
    omega_values: &[f64],
    params: &PhysicalParams,
    opts: &ChainOptions,
) -> Result<Vec<(f64, f64)>> {
    omega_values
        .par_iter()
        .map(|&omega| {
            let p = params.with_omega(omega);
            p.validate()?;
            let grid = p.grid(opts.n_points)?;
            let (_, schedule) = design_emission_schedule(&p, &grid, &opts.inversion)?;
            let emission = simulate_emission(&p, &schedule, &opts.tolerances)?;
            Ok((omega, emission.trajectory.max_population(H)))
        })
        .collect()
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}
