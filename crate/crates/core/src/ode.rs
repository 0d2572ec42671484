//! Adaptive Dormand–Prince 5(4) integration of complex linear systems with
//! dense output onto a fixed time grid.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step, in units of the output grid spacing.
    pub max_step_spacings: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_step_spacings: 10.0,
            max_steps: 5_000_000,
        }
    }
}

// Dormand–Prince coefficients
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// error weights: fifth-order minus embedded fourth-order solution
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension (Hairer, Nørsett & Wanner)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type Vector<const N: usize> = [C64; N];

#[inline]
fn combine<const N: usize>(y: &Vector<N>, h: f64, terms: &[(f64, &Vector<N>)]) -> Vector<N> {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..N {
            out[i] += k[i] * (h * w);
        }
    }
    out
}

/// Integrates `dy/dt = rhs(t, y)` from `grid.start()` to `grid.end()` and
/// returns the solution at every grid node.
///
/// Steps are chosen by the embedded error estimate and are independent of the
/// grid except for the step cap; node values come from the fourth-order
/// continuous extension. The result is a deterministic function of the inputs.
pub fn integrate_dopri5<const N: usize, F>(
    mut rhs: F,
    y0: Vector<N>,
    grid: &TimeGrid,
    tol: &Tolerances,
) -> Result<Vec<Vector<N>>>
where
    F: FnMut(f64, &Vector<N>) -> Vector<N>,
{
    let n_out = grid.len();
    let mut out = Vec::with_capacity(n_out);
    out.push(y0);
    let spacing = grid.spacing();
    let h_max = tol.max_step_spacings * spacing;
    let h_min = 1e-10 * spacing;
    let t_end = grid.end();

    let mut t = grid.start();
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = spacing;
    let mut next = 1usize;
    let mut steps = 0usize;
    let mut last_rejected = false;

    while next < n_out {
        if steps >= tol.max_steps {
            return Err(Error::Integration {
                time: t,
                reason: format!("exceeded {} steps", tol.max_steps),
            });
        }
        steps += 1;
        if h < h_min {
            return Err(Error::Integration {
                time: t,
                reason: format!("step size {h:e} underflowed"),
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let t_new = if last { t_end } else { t + h };
        let k6 = rhs(
            t_new,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(t_new, &y_new);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integration {
                time: t,
                reason: "non-finite state".into(),
            });
        }

        if err <= 1.0 {
            // dense output for every node inside (t, t_new]
            let mut r2 = [C64::default(); N];
            let mut r3 = [C64::default(); N];
            let mut r4 = [C64::default(); N];
            let mut r5 = [C64::default(); N];
            let mut dense_ready = false;
            while next < n_out && (grid.time(next) <= t_new || next == n_out - 1 && last) {
                let tn = grid.time(next);
                if tn == t_new {
                    out.push(y_new);
                } else {
                    if !dense_ready {
                        for i in 0..N {
                            let dy = y_new[i] - y[i];
                            let bspl = k1[i] * h - dy;
                            r2[i] = dy;
                            r3[i] = bspl;
                            r4[i] = dy - k7[i] * h - bspl;
                            r5[i] = (k1[i] * D1
                                + k3[i] * D3
                                + k4[i] * D4
                                + k5[i] * D5
                                + k6[i] * D6
                                + k7[i] * D7)
                                * h;
                        }
                        dense_ready = true;
                    }
                    let s = (tn - t) / h;
                    let s1 = 1.0 - s;
                    let mut v = [C64::default(); N];
                    for i in 0..N {
                        v[i] = y[i] + (r2[i] + (r3[i] + (r4[i] + r5[i] * s1) * s) * s1) * s;
                    }
                    out.push(v);
                }
                next += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(h_max);
            last_rejected = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_phase_rotation() {
        let grid = TimeGrid::new(0.0, 20.0, 1001).unwrap();
        let w = 3.7;
        let out = integrate_dopri5(
            |_, y: &[C64; 1]| [y[0] * C64::new(0.0, -w)],
            [C64::new(1.0, 0.0)],
            &grid,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(out.len(), grid.len());
        for (k, t) in grid.times().iter().enumerate() {
            let exact = C64::new(0.0, -w * t).exp();
            let err = (out[k][0] - exact).norm();
            assert!(err < 5e-8, "t={t} err={err:e}");
        }
    }

    #[test]
    fn driven_decay_against_closed_form() {
        // y' = -y/2 + e^{-t}, y(0) = 0  =>  y = 2(e^{-t/2} - e^{-t})
        let grid = TimeGrid::new(0.0, 30.0, 301).unwrap();
        let out = integrate_dopri5(
            |t, y: &[C64; 1]| [y[0] * -0.5 + C64::new((-t).exp(), 0.0)],
            [C64::default()],
            &grid,
            &Tolerances::default(),
        )
        .unwrap();
        for (k, &t) in grid.times().iter().enumerate() {
            let exact = 2.0 * ((-0.5 * t).exp() - (-t).exp());
            assert!((out[k][0].re - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn step_cap_and_failure_reporting() {
        let grid = TimeGrid::new(0.0, 1.0, 11).unwrap();
        let tol = Tolerances {
            max_steps: 3,
            ..Tolerances::default()
        };
        let res = integrate_dopri5(
            |_, y: &[C64; 1]| [y[0] * C64::new(0.0, -1.0)],
            [C64::new(1.0, 0.0)],
            &grid,
            &tol,
        );
        assert!(matches!(res, Err(Error::Integration { .. })));

        let res = integrate_dopri5(
            |_, _: &[C64; 1]| [C64::new(f64::NAN, 0.0)],
            [C64::new(1.0, 0.0)],
            &grid,
            &Tolerances::default(),
        );
        assert!(matches!(res, Err(Error::Integration { .. })));
    }
}
