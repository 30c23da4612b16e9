//! Dormand–Prince 5(4) with a PI step-size controller and cubic Hermite
//! dense output between accepted steps.

use super::{IntegratorConfig, OdeState};
use crate::error::Error;

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

// Fifth-order weights (also row 7 of the tableau, hence FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth- minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI controller: h_new = h · safety · err^(−ALPHA) · err_prev^(BETA)
const ALPHA: f64 = 0.7 / 5.0;
const BETA: f64 = 0.4 / 5.0;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const UNDERFLOW: f64 = 1e-14;

pub(crate) enum Output<'a> {
    /// Interpolate at these strictly increasing times.
    At(&'a [f64]),
    EveryStep,
}

#[derive(Debug, Clone)]
pub(crate) struct RawSolution<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub accepted: usize,
    pub rejected: usize,
    /// Last proposed step size, reusable to warm-start a continuation.
    pub last_step: f64,
}

pub(crate) struct Failure<S> {
    pub error: Error,
    pub partial: RawSolution<S>,
}

fn hermite<S: OdeState>(y0: S, f0: S, y1: S, f1: S, h: f64, theta: f64) -> S {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    y0 * h00 + f0 * (h * h10) + y1 * h01 + f1 * (h * h11)
}

/// Component-wise scaled max-norm of the local error estimate.
fn error_norm<S: OdeState>(err: &S, y: &S, y_new: &S, cfg: &IntegratorConfig) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..S::DIM {
        let scale = y.error_scale(y_new, i, cfg.abs_tol, cfg.rel_tol);
        let e = err.component(i).abs() / scale;
        if e.is_nan() || (scale == 0.0 && err.component(i) != 0.0) {
            return f64::INFINITY;
        }
        worst = worst.max(e);
    }
    worst
}

pub(crate) fn dopri5<S, F>(
    rhs: &F,
    t0: f64,
    t1: f64,
    x0: S,
    cfg: &IntegratorConfig,
    h0: f64,
    output: Output<'_>,
) -> Result<RawSolution<S>, Failure<S>>
where
    S: OdeState,
    F: Fn(f64, S) -> S,
{
    let span = t1 - t0;
    let mut sol = RawSolution {
        times: Vec::new(),
        states: Vec::new(),
        accepted: 0,
        rejected: 0,
        last_step: h0,
    };
    let fail = |error: Error, sol: RawSolution<S>| {
        Err(Failure {
            error,
            partial: sol,
        })
    };

    if !x0.all_finite() {
        return fail(Error::NonFinite { step: 0, t: t0 }, sol);
    }
    let mut next_sample = 0usize;
    match output {
        Output::At(ts) => {
            while next_sample < ts.len() && ts[next_sample] <= t0 {
                sol.times.push(ts[next_sample]);
                sol.states.push(x0);
                next_sample += 1;
            }
        }
        Output::EveryStep => {
            sol.times.push(t0);
            sol.states.push(x0);
        }
    }

    let mut t = t0;
    let mut y = x0;
    let mut k1 = rhs(t, y);
    if !k1.all_finite() {
        return fail(Error::NonFinite { step: 0, t }, sol);
    }
    let mut h = h0.min(span);
    let mut err_prev = 1e-4f64;
    let mut last_rejected = false;

    while t < t1 {
        if sol.accepted + sol.rejected >= cfg.max_steps {
            let max_steps = cfg.max_steps;
            return fail(
                Error::MaxStepsExceeded {
                    max_steps,
                    t_reached: t,
                    partial: None,
                },
                sol,
            );
        }
        if h < UNDERFLOW * span {
            return fail(Error::StepUnderflow { t, h }, sol);
        }
        let last = t + h >= t1;
        let h_step = if last { t1 - t } else { h };

        let k2 = rhs(t + C2 * h_step, y + k1 * (A21 * h_step));
        let k3 = rhs(t + C3 * h_step, y + (k1 * A31 + k2 * A32) * h_step);
        let k4 = rhs(
            t + C4 * h_step,
            y + (k1 * A41 + k2 * A42 + k3 * A43) * h_step,
        );
        let k5 = rhs(
            t + C5 * h_step,
            y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h_step,
        );
        let k6 = rhs(
            t + h_step,
            y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h_step,
        );
        let y_new = y + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * h_step;
        let t_new = if last { t1 } else { t + h_step };
        let k7 = rhs(t_new, y_new);
        let err_vec = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h_step;
        let err = if y_new.all_finite() && k7.all_finite() {
            error_norm(&err_vec, &y, &y_new, cfg)
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            match output {
                Output::At(ts) => {
                    while next_sample < ts.len() && ts[next_sample] <= t_new {
                        let tau = ts[next_sample];
                        let state = if tau == t_new {
                            y_new
                        } else {
                            hermite(y, k1, y_new, k7, h_step, (tau - t) / h_step)
                        };
                        sol.times.push(tau);
                        sol.states.push(state);
                        next_sample += 1;
                    }
                }
                Output::EveryStep => {
                    sol.times.push(t_new);
                    sol.states.push(y_new);
                }
            }
            sol.accepted += 1;

            let mut factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                cfg.safety_factor * err.powf(-ALPHA) * err_prev.powf(BETA)
            };
            factor = factor.clamp(MIN_FACTOR, MAX_FACTOR);
            if last_rejected {
                factor = factor.min(1.0);
            }
            err_prev = err.max(1e-4);
            last_rejected = false;

            t = t_new;
            y = y_new;
            k1 = k7;
            // The clipped final step says nothing about the natural step size.
            if !last {
                h = h_step * factor;
            }
        } else {
            sol.rejected += 1;
            let factor = if err.is_finite() {
                (cfg.safety_factor * err.powf(-0.2)).max(MIN_FACTOR)
            } else {
                MIN_FACTOR
            };
            h = h_step * factor;
            last_rejected = true;
        }
    }
    sol.last_step = h;
    Ok(sol)
}
