//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with
//!
//! ```text
//! cargo test -p stirap-core --release --test acceptance
//! ```

mod common;

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stirap_core::dynamics::{emitted_envelope_adiabatic, integrate_adiabatic, DriveTerm};
use stirap_core::ode::Tolerances;
use stirap_core::protocol::{
    h_population_scan, log_log_slope, polarization_outcome, run_chain,
    run_state_transfer_polarization, run_state_transfer_simple, simple_outcome, simulate_emission,
    sweep_omega, ChainOptions,
};
use stirap_core::pulse::{closed_form_c, design_emission_schedule, invert_envelope_to_theta};
use stirap_core::{
    ChannelModel, InversionOptions, PhotonEnvelope, PhysicalParams, PulseSchedule, QubitState,
    TimeGrid,
};

/// Absorption success for Ω/Γ ∈ {2, 4, 6, 8, 10, 20, 40}, frozen from the
/// fixed-step RK4 cascade oracle (four substeps per grid interval; halving
/// the substep changes no digit shown).
const FIG4_PINNED: [(f64, f64); 7] = [
    (2.0, 0.993886428468315),
    (4.0, 0.999665870660304),
    (6.0, 0.999934278435781),
    (8.0, 0.999978212731140),
    (10.0, 0.999990092003750),
    (20.0, 0.999997756572048),
    (40.0, 0.999998228963689),
];

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed += 1;
        }
    }
}

fn opts() -> ChainOptions {
    ChainOptions::default()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

/// max_t |norm balance − 1| of a fresh emission run.
fn norm_balance_error(params: &PhysicalParams) -> stirap_core::Result<f64> {
    let grid = params.grid(opts().n_points)?;
    let (_, s) = design_emission_schedule(params, &grid, &InversionOptions::default())?;
    let e = simulate_emission(params, &s, &Tolerances::default())?;
    Ok(e.trajectory
        .norm_balance(params.gamma)
        .iter()
        .fold(0.0_f64, |m, b| m.max((b - 1.0).abs())))
}

fn fig3(report: &mut Report, balances: &mut Vec<(String, f64)>) -> stirap_core::Result<()> {
    let omegas = [2.0, 5.0, 10.0];
    let mut distances = Vec::new();
    let mut slowest = 0.0_f64;
    let mut ideal_peak = 0.0;
    for &omega in &omegas {
        let p = PhysicalParams::reference(omega);
        let started = Instant::now();
        let grid = p.grid(opts().n_points)?;
        let (target, s) = design_emission_schedule(&p, &grid, &InversionOptions::default())?;
        let e = simulate_emission(&p, &s, &Tolerances::default())?;
        slowest = slowest.max(started.elapsed().as_secs_f64());

        let ideal = target.intensities();
        let p_r: Vec<f64> = e
            .trajectory
            .populations()
            .iter()
            .map(|pop| pop[3])
            .collect();
        ideal_peak = ideal.iter().fold(0.0_f64, |m, &v| m.max(v));
        distances.push(common::max_abs_diff(&p_r, &ideal));
        let balance = e
            .trajectory
            .norm_balance(p.gamma)
            .iter()
            .fold(0.0_f64, |m, b| m.max((b - 1.0).abs()));
        balances.push((format!("fig3 Ω={omega}"), balance));
    }
    report.check(
        "fig3_convergence_to_ideal",
        strictly_decreasing(&distances) && distances[2] <= 0.05 * ideal_peak,
        format!(
            "L∞ for Ω/Γ=2,5,10: {:.3e}, {:.3e}, {:.3e}; Ω=10 is {:.2}% of ideal peak {:.6}",
            distances[0],
            distances[1],
            distances[2],
            100.0 * distances[2] / ideal_peak,
            ideal_peak
        ),
    );
    report.check(
        "fig3_runtime",
        slowest <= 60.0,
        format!("slowest trace {slowest:.2} s (limit 60 s)"),
    );
    Ok(())
}

fn fig4(report: &mut Report) -> stirap_core::Result<()> {
    let omegas: Vec<f64> = FIG4_PINNED.iter().map(|(w, _)| *w).collect();
    let curve = sweep_omega(
        &omegas,
        &PhysicalParams::reference(1.0),
        &ChannelModel::ideal(),
        &opts(),
    )?;
    let success: Vec<f64> = curve.iter().map(|(_, s)| *s).collect();
    let last = *success.last().unwrap();
    report.check(
        "fig4_monotone_and_high",
        strictly_increasing(&success) && last >= 0.99,
        format!(
            "success {:?}; at Ω=40Γ {last:.9}",
            success
                .iter()
                .map(|s| format!("{s:.9}"))
                .collect::<Vec<_>>()
        ),
    );
    let worst = curve
        .iter()
        .zip(FIG4_PINNED)
        .fold(0.0_f64, |m, ((_, s), (_, pinned))| {
            m.max((s - pinned).abs())
        });
    report.check(
        "fig4_regression",
        worst <= 1e-6,
        format!("max |success − pinned oracle| = {worst:.2e} (tolerance 1e-6)"),
    );
    Ok(())
}

fn h_population(report: &mut Report, balances: &mut Vec<(String, f64)>) -> stirap_core::Result<()> {
    let omegas = [5.0, 10.0, 20.0, 40.0];
    let scan = h_population_scan(&omegas, &PhysicalParams::reference(1.0), &opts())?;
    let at10 = scan[1].1;
    report.check(
        "h_population_small",
        at10 < 1e-3,
        format!("max|c_h|² at Ω=10Γ = {at10:.3e} (limit 1e-3)"),
    );
    let slope = log_log_slope(&scan);
    report.check(
        "h_population_scaling",
        (slope + 2.0).abs() <= 0.2,
        format!(
            "log-log slope {slope:.4} over Ω/Γ=5,10,20,40 (max|c_h|²: {})",
            scan.iter()
                .map(|(_, h)| format!("{h:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    for &omega in &omegas {
        balances.push((
            format!("hscan Ω={omega}"),
            norm_balance_error(&PhysicalParams::reference(omega))?,
        ));
    }
    Ok(())
}

fn round_trip(report: &mut Report) -> stirap_core::Result<()> {
    let p = PhysicalParams::reference(10.0);
    let grid = p.grid(opts().n_points)?;
    let (target, s) = design_emission_schedule(&p, &grid, &InversionOptions::default())?;
    let c = integrate_adiabatic(
        &s,
        p.gamma,
        &DriveTerm::zero(grid),
        C64::new(1.0, 0.0),
        &Tolerances::default(),
    )?;
    let recovered = emitted_envelope_adiabatic(&c, &s)?;
    let got: Vec<f64> = recovered.values().iter().map(|z| z.norm()).collect();
    let want: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| common::gaussian(&p, t))
        .collect();
    let err = common::max_abs_diff(&got, &want);
    let err_target = common::max_abs_diff(
        &got,
        &target.values().iter().map(|z| z.norm()).collect::<Vec<_>>(),
    );
    report.check(
        "inversion_round_trip",
        err <= 1e-8 && err_target <= 1e-8,
        format!("max ||c sinθ| − f| = {err:.2e} (tolerance 1e-8)"),
    );

    // f = exp(−Γ(t − t0)/2) is what a bare |r⟩ decay radiates; checked both
    // as given (unit emission on the half line) and renormalized on the grid
    let values: Vec<f64> = grid
        .times()
        .iter()
        .map(|t| (-0.5 * p.gamma * t).exp())
        .collect();
    let raw = PhotonEnvelope::from_real(grid, &values)?;
    let on_grid = raw.scaled(C64::new(
        1.0 / raw.emission_probability(p.gamma).sqrt(),
        0.0,
    ));
    let mut exact = true;
    for target in [&raw, &on_grid] {
        let sched =
            invert_envelope_to_theta(target, p.gamma, p.omega, &InversionOptions::default())?;
        exact &= sched.theta().iter().all(|&th| th == FRAC_PI_2);
    }
    report.check(
        "exponential_target_is_pi_over_2",
        exact,
        format!(
            "θ ≡ π/2 at all {} nodes for both normalizations: {exact}",
            grid.len()
        ),
    );
    Ok(())
}

fn closed_form(report: &mut Report) -> stirap_core::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0057_17a9);
    let grid = TimeGrid::new(0.0, 50.0, opts().n_points)?;
    let mut worst = 0.0_f64;
    for _ in 0..3 {
        // smooth rise to a random plateau with a random ripple
        let centre: f64 = rng.gen_range(10.0..40.0);
        let width: f64 = rng.gen_range(2.0..10.0);
        let plateau: f64 = rng.gen_range(0.3..1.0);
        let ripple: f64 = rng.gen_range(0.0..0.2);
        let period: f64 = rng.gen_range(5.0..20.0);
        let theta: Vec<f64> = grid
            .times()
            .iter()
            .map(|&t| {
                let rise = 0.5 * (1.0 + ((t - centre) / width).tanh());
                let wobble = 1.0 + ripple * (t / period).sin();
                (FRAC_PI_2 * plateau * rise * wobble).clamp(0.0, FRAC_PI_2)
            })
            .collect();
        let s = PulseSchedule::new(grid, theta, 10.0)?;
        let closed = closed_form_c(&s, 1.0);
        let ode = integrate_adiabatic(
            &s,
            1.0,
            &DriveTerm::zero(grid),
            C64::new(1.0, 0.0),
            &Tolerances::default(),
        )?;
        for (a, b) in closed.iter().zip(&ode) {
            worst = worst.max((a - b).norm());
        }
    }
    report.check(
        "closed_form_vs_ode",
        worst <= 1e-8,
        format!("max |c_closed − c_ode| over 3 random schedules = {worst:.2e} (tolerance 1e-8)"),
    );
    Ok(())
}

/// Receiver fidelity for a = b = 1/√2 by listing the outcomes: the photon is
/// absorbed with amplitude α√p (coherent with the |g₂⟩ half), or it is lost
/// and leaves |g₂⟩ tagged by an orthogonal environment.
fn simple_fidelity_oracle(alpha: C64, p: f64) -> f64 {
    let coherent_overlap = 0.5 * alpha * p.sqrt() + 0.5;
    let lost_weight = 0.5 * (1.0 - alpha.norm_sqr() * p);
    coherent_overlap.norm_sqr() + 0.5 * lost_weight
}

fn protocols(report: &mut Report) -> stirap_core::Result<()> {
    let p = PhysicalParams::reference(10.0);
    let chain = run_chain(&p, 0.0, &opts())?;
    let qubit = QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8))?;

    let mut fidelities = Vec::new();
    let mut per_t = Vec::new();
    for t in [0.1_f64, 0.5, 1.0] {
        let channel = ChannelModel::new(C64::new(t.sqrt(), 0.0), 0.0)?;
        let out = polarization_outcome(&qubit, &channel, &chain);
        fidelities.push(out.fidelity);
        per_t.push(out.success_probability / t);
    }
    let fid_spread = fidelities
        .iter()
        .fold(0.0_f64, |m, f| m.max((f - fidelities[0]).abs()));
    let scale_spread = per_t
        .iter()
        .fold(0.0_f64, |m, s| m.max((s - per_t[0]).abs()));
    report.check(
        "polarization_protocol_separation",
        fid_spread <= 1e-9 && scale_spread <= 1e-9 && all_in_unit_interval(&fidelities),
        format!(
            "fidelity {:.12} spread {fid_spread:.1e}; success/|α|² spread {scale_spread:.1e}",
            fidelities[0]
        ),
    );

    let half = std::f64::consts::FRAC_1_SQRT_2;
    let plus = QubitState::new(C64::new(half, 0.0), C64::new(half, 0.0))?;
    let mut worst = 0.0_f64;
    for alpha in [
        C64::new(1.0, 0.0),
        C64::new(0.5_f64.sqrt(), 0.0),
        C64::new(0.1_f64.sqrt(), 0.0),
        C64::from_polar(0.8, 0.3),
    ] {
        let channel = ChannelModel::new(alpha, 0.0)?;
        let out = simple_outcome(&plus, &channel, &chain);
        worst = worst
            .max((out.fidelity - simple_fidelity_oracle(alpha, chain.chain_probability())).abs());
    }
    report.check(
        "simple_protocol_fidelity",
        worst <= 1e-9,
        format!("max |F − branch oracle| over four links = {worst:.1e} (tolerance 1e-9)"),
    );
    Ok(())
}

fn all_in_unit_interval(fidelities: &[f64]) -> bool {
    fidelities.iter().all(|f| (0.0..=1.0).contains(f))
}

fn scaling(report: &mut Report, balances: &mut Vec<(String, f64)>) -> stirap_core::Result<()> {
    let base = PhysicalParams::reference(10.0);
    let qubit = QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8))?;
    let channel = ChannelModel::new(C64::from_polar(0.9, 0.4), 3.0)?;
    let outputs = |p: &PhysicalParams, factor: f64| -> stirap_core::Result<Vec<f64>> {
        let ch = ChannelModel::new(channel.alpha, channel.tau / factor)?;
        let chain = run_chain(p, ch.tau, &opts())?;
        let simple = run_state_transfer_simple(&qubit, p, &ch, &opts())?;
        let pol = run_state_transfer_polarization(&qubit, p, &ch, &opts())?;
        Ok(vec![
            chain.emission_probability,
            chain.chain_probability(),
            chain.max_h_emitter,
            chain.max_h_receiver,
            simple.success_probability,
            simple.fidelity,
            pol.success_probability,
            pol.fidelity,
        ])
    };
    let reference = outputs(&base, 1.0)?;
    let mut worst = 0.0_f64;
    for factor in [0.37, 3.1] {
        let scaled = base.rescaled(factor);
        let got = outputs(&scaled, factor)?;
        worst = worst.max(common::max_abs_diff(&reference, &got));
        balances.push((format!("rescaled ×{factor}"), norm_balance_error(&scaled)?));
    }
    report.check(
        "unit_scaling_invariance",
        worst <= 1e-8,
        format!("max output change under rescaling by 0.37 and 3.1 = {worst:.1e} (tolerance 1e-8)"),
    );
    Ok(())
}

fn run(report: &mut Report) -> stirap_core::Result<()> {
    let mut balances = Vec::new();
    fig3(report, &mut balances)?;
    fig4(report)?;
    h_population(report, &mut balances)?;
    balances.push((
        "reference Ω=10".into(),
        norm_balance_error(&PhysicalParams::reference(10.0))?,
    ));
    let (label, worst) = balances
        .iter()
        .cloned()
        .fold((String::new(), 0.0_f64), |acc, (l, b)| {
            if b > acc.1 {
                (l, b)
            } else {
                acc
            }
        });
    report.check(
        "norm_balance",
        worst <= 1e-6,
        format!(
            "max |‖ψ‖² + Γ∫|c_r|² − 1| over {} emission runs = {worst:.1e} ({label})",
            balances.len()
        ),
    );
    round_trip(report)?;
    closed_form(report)?;
    protocols(report)?;
    let mut scaling_balances = Vec::new();
    scaling(report, &mut scaling_balances)?;
    let worst = scaling_balances.iter().fold(0.0_f64, |m, (_, b)| m.max(*b));
    report.check(
        "norm_balance_rescaled",
        worst <= 1e-6,
        format!("max deviation on rescaled emission runs = {worst:.1e}"),
    );
    Ok(())
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    if let Err(e) = run(&mut report) {
        println!("FAIL acceptance_run: {e}");
        return ExitCode::FAILURE;
    }
    if report.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failed);
        ExitCode::FAILURE
    }
}
