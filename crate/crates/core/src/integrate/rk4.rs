use super::{check_span, Method, OdeState, RawSolution, Trajectory, TrajectoryMeta};
use crate::error::{Error, Result};
use crate::state::State3;

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<S, F>(rhs: &F, t: f64, state: S, h: f64) -> Result<S>
where
    S: OdeState,
    F: Fn(f64, S) -> S,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("h", format!("step must be > 0, got {h}")));
    }
    let half = 0.5 * h;
    let k1 = rhs(t, state);
    let k2 = rhs(t + half, state + k1 * half);
    let k3 = rhs(t + half, state + k2 * half);
    let k4 = rhs(t + h, state + k3 * h);
    let next = state + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    if ![k1, k2, k3, k4, next].iter().all(OdeState::all_finite) {
        return Err(Error::NonFinite { step: 0, t });
    }
    Ok(next)
}

pub(crate) fn integrate_fixed_raw<S, F>(
    rhs: &F,
    t0: f64,
    t1: f64,
    x0: S,
    n_steps: usize,
) -> Result<RawSolution<S>>
where
    S: OdeState,
    F: Fn(f64, S) -> S,
{
    check_span(t0, t1)?;
    if n_steps == 0 {
        return Err(Error::invalid("n_steps", "must be ≥ 1"));
    }
    let h = (t1 - t0) / n_steps as f64;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(t0);
    states.push(x0);
    let mut y = x0;
    for i in 0..n_steps {
        let t = t0 + i as f64 * h;
        y = rk4_step(rhs, t, y, h).map_err(|e| match e {
            Error::NonFinite { .. } => Error::NonFinite { step: i, t },
            other => other,
        })?;
        times.push(if i + 1 == n_steps {
            t1
        } else {
            t0 + (i + 1) as f64 * h
        });
        states.push(y);
    }
    Ok(RawSolution {
        times,
        states,
        accepted: n_steps,
        rejected: 0,
        last_step: h,
    })
}

/// `n_steps` equal RK4 steps over [t0, t1]; every step endpoint is a sample
/// and s = t.
pub fn integrate_fixed<F>(
    rhs: F,
    t0: f64,
    t1: f64,
    x0: State3,
    n_steps: usize,
) -> Result<Trajectory>
where
    F: Fn(f64, State3) -> State3,
{
    let raw = integrate_fixed_raw(&rhs, t0, t1, x0, n_steps)?;
    let meta = TrajectoryMeta {
        steps_taken: raw.accepted,
        steps_rejected: 0,
        method: Method::Rk4Fixed,
        abs_tol: None,
        rel_tol: None,
        mode: None,
    };
    Ok(Trajectory::from_raw(raw, meta, |t| t))
}
