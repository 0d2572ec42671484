//! Independent reference solutions for the integration tests.
//!
//! Nothing here goes through the library's integrator, drive interpolation or
//! Hamiltonian builder: the right-hand side is written out by hand and
//! stepped with classical fourth-order Runge–Kutta on a fixed sub-grid. The
//! only library input is the pulse schedule itself, i.e. θ(t), which is the
//! definition of the experiment rather than part of the solver.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use stirap_core::{PhysicalParams, PulseSchedule, TimeGrid};

pub type Amplitudes = [C64; 4];

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Right-hand side of i dψ/dt = Hψ − |r⟩D for one atom, spelled out per
/// component. `omega1`/`omega2` already carry the detuning phases.
fn atom_rhs(y: &Amplitudes, gamma: f64, omega1: C64, omega2: C64, drive: C64) -> Amplitudes {
    let [g1, _g2, h, r] = *y;
    // H ψ with H_{g1,h} = −Ω₁/2, H_{r,h} = −Ω₂/2, H_{r,r} = −iΓ/2
    let hg1 = -0.5 * omega1 * h;
    let hh = -0.5 * (omega1.conj() * g1 + omega2.conj() * r);
    let hr = -0.5 * omega2 * h - 0.5 * I * gamma * r;
    [-I * hg1, C64::default(), -I * hh, -I * hr + I * drive]
}

/// Detuning-dressed Rabi frequencies of `schedule` at time `t`.
fn couplings(params: &PhysicalParams, theta: f64, omega: f64, t: f64, t_start: f64) -> (C64, C64) {
    let (s, c) = theta.sin_cos();
    let elapsed = t - t_start;
    (
        C64::from_polar(omega * s, params.delta1 * elapsed),
        C64::from_polar(omega * c, params.delta2 * elapsed),
    )
}

fn axpy<const N: usize>(y: &[C64; N], a: f64, k: &[C64; N]) -> [C64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += k[i] * a;
    }
    out
}

/// Classical RK4 on `grid` with `substeps` equal steps per grid interval.
/// Returns the state at every grid node.
pub fn rk4<const N: usize>(
    mut rhs: impl FnMut(f64, &[C64; N]) -> [C64; N],
    y0: [C64; N],
    grid: &TimeGrid,
    substeps: usize,
) -> Vec<[C64; N]> {
    let dt = grid.spacing() / substeps as f64;
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for k in 0..grid.len() - 1 {
        let t_node = grid.start() + k as f64 * grid.spacing();
        for j in 0..substeps {
            let t = t_node + j as f64 * dt;
            let k1 = rhs(t, &y);
            let k2 = rhs(t + 0.5 * dt, &axpy(&y, 0.5 * dt, &k1));
            let k3 = rhs(t + 0.5 * dt, &axpy(&y, 0.5 * dt, &k2));
            let k4 = rhs(t + dt, &axpy(&y, dt, &k3));
            for i in 0..N {
                y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
        }
        out.push(y);
    }
    out
}

/// Emitter starting in |g₁⟩ with vacuum input.
pub fn emission(
    params: &PhysicalParams,
    schedule: &PulseSchedule,
    substeps: usize,
) -> Vec<Amplitudes> {
    let start = schedule.grid().start();
    let rhs = |t: f64, y: &Amplitudes| {
        let (o1, o2) = couplings(params, schedule.theta_at(t), schedule.omega(), t, start);
        atom_rhs(y, params.gamma, o1, o2, C64::default())
    };
    let mut g1 = [C64::default(); 4];
    g1[0] = C64::new(1.0, 0.0);
    rk4(rhs, g1, schedule.grid(), substeps)
}

/// Emitter and receiver integrated as one cascaded system over the emitter
/// grid: the receiver drive is αΓ times the emitter's live |r⟩ amplitude, so
/// no sampled envelope or interpolation is involved. The receiver angle is
/// the emitter angle reflected about t_max, read directly from the emitter
/// schedule.
///
/// Returns (emitter states, receiver states) on the grid.
pub fn chain(
    params: &PhysicalParams,
    emitter: &PulseSchedule,
    alpha: C64,
    substeps: usize,
) -> (Vec<Amplitudes>, Vec<Amplitudes>) {
    let start = emitter.grid().start();
    let pivot = 2.0 * params.t_max;
    let rhs = |t: f64, y: &[C64; 8]| {
        let e: Amplitudes = [y[0], y[1], y[2], y[3]];
        let r: Amplitudes = [y[4], y[5], y[6], y[7]];
        let (o1, o2) = couplings(params, emitter.theta_at(t), emitter.omega(), t, start);
        let de = atom_rhs(&e, params.gamma, o1, o2, C64::default());
        let (p1, p2) = couplings(
            params,
            emitter.theta_at(pivot - t),
            emitter.omega(),
            t,
            start,
        );
        let dr = atom_rhs(&r, params.gamma, p1, p2, alpha * params.gamma * e[3]);
        [de[0], de[1], de[2], de[3], dr[0], dr[1], dr[2], dr[3]]
    };
    let mut y0 = [C64::default(); 8];
    y0[0] = C64::new(1.0, 0.0);
    let out = rk4(rhs, y0, emitter.grid(), substeps);
    out.into_iter()
        .map(|y| ([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]]))
        .unzip()
}

/// Normalized Gaussian (2/(πΓ²σ²))^{1/4} exp(−(t_max − t)²/σ²).
pub fn gaussian(params: &PhysicalParams, t: f64) -> f64 {
    let PhysicalParams {
        gamma,
        sigma,
        t_max,
        ..
    } = *params;
    (2.0 / (std::f64::consts::PI * gamma * gamma * sigma * sigma)).powf(0.25)
        * (-(t_max - t).powi(2) / (sigma * sigma)).exp()
}

/// Max |a_k − b_k| over paired samples.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
