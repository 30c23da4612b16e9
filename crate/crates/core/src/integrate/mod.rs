//! Deterministic integrators: fixed-step classical RK4 and an adaptive
//! Dormand–Prince 5(4) pair, plus sampling plans for spans covering many
//! decades of time.

mod dopri;
mod rk4;
mod sampling;

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::dynamics::{eval_sl_field, SystemParams};
use crate::error::{Error, Result};
use crate::state::State3;
use crate::timegauge::{scale_time, unscale_time, Gauge};

pub use rk4::{integrate_fixed, rk4_step};
pub use sampling::{SamplingMode, SamplingPlan};

pub(crate) use dopri::{dopri5, Output, RawSolution};
pub(crate) use rk4::integrate_fixed_raw;

/// Anything the integrators can advance: a fixed-size real vector.
pub trait OdeState: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    const DIM: usize;

    fn component(&self, i: usize) -> f64;

    /// Error scale for component `i` across a step from `self` to `next`.
    fn error_scale(&self, next: &Self, i: usize, abs_tol: f64, rel_tol: f64) -> f64 {
        abs_tol + rel_tol * self.component(i).abs().max(next.component(i).abs())
    }

    fn all_finite(&self) -> bool {
        (0..Self::DIM).all(|i| self.component(i).is_finite())
    }
}

impl OdeState for State3 {
    const DIM: usize = 3;

    fn component(&self, i: usize) -> f64 {
        self[i]
    }
}

/// A reference state together with a small offset from it; advanced as a
/// single 6-dimensional system so both share one step sequence. The offset
/// is error-controlled relative to its own norm, so it stays accurate however
/// far it shrinks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinState {
    pub base: State3,
    pub offset: State3,
}

impl Add for TwinState {
    type Output = TwinState;
    fn add(self, rhs: TwinState) -> TwinState {
        TwinState {
            base: self.base + rhs.base,
            offset: self.offset + rhs.offset,
        }
    }
}

impl Mul<f64> for TwinState {
    type Output = TwinState;
    fn mul(self, k: f64) -> TwinState {
        TwinState {
            base: self.base * k,
            offset: self.offset * k,
        }
    }
}

impl OdeState for TwinState {
    const DIM: usize = 6;

    fn component(&self, i: usize) -> f64 {
        if i < 3 {
            self.base[i]
        } else {
            self.offset[i - 3]
        }
    }

    fn error_scale(&self, next: &Self, i: usize, abs_tol: f64, rel_tol: f64) -> f64 {
        if i < 3 {
            abs_tol + rel_tol * self.base[i].abs().max(next.base[i].abs())
        } else {
            let size = self.offset.norm().max(next.offset.norm());
            abs_tol * size + rel_tol * self.offset[i - 3].abs().max(next.offset[i - 3].abs())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "rk4")]
    Rk4Fixed,
    #[serde(rename = "rk45")]
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationMode {
    /// Integrate dx/dt = λ t^(−D) f(x) directly in t.
    DirectT,
    /// Integrate dx/ds = f(x) in the scaled time s and relabel with t.
    ScaledS,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// First trial step; `None` picks `1e-2 · span / sample_count`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    pub safety_factor: f64,
    /// Step count used by the fixed-step method.
    pub fixed_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45Adaptive,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            initial_step: None,
            max_steps: 10_000_000,
            safety_factor: 0.9,
            fixed_steps: 100_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self.rel_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", "must be > 0"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", "must be > 0"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", "must be > 0"));
        }
        if !(self.safety_factor > 0.0 && self.safety_factor < 1.0) {
            return Err(Error::invalid("safety_factor", "must lie in (0, 1)"));
        }
        if self.fixed_steps == 0 {
            return Err(Error::invalid("fixed_steps", "must be > 0"));
        }
        if let Some(h) = self.initial_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::invalid("initial_step", "must be > 0"));
            }
        }
        Ok(())
    }

    fn initial_step_for(&self, span: f64, sample_count: usize) -> f64 {
        self.initial_step
            .unwrap_or(1e-2 * span / sample_count.max(1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub s: f64,
    pub state: State3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub steps_taken: usize,
    pub steps_rejected: usize,
    pub method: Method,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub mode: Option<IntegrationMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn final_state(&self) -> Option<State3> {
        self.samples.last().map(|s| s.state)
    }

    pub fn states(&self) -> impl Iterator<Item = State3> + '_ {
        self.samples.iter().map(|s| s.state)
    }

    /// Largest |component| over all samples.
    pub fn max_abs_component(&self) -> f64 {
        self.states().map(State3::max_abs).fold(0.0, f64::max)
    }

    /// Keeps at most `max_samples` evenly strided samples, always including
    /// the first and the last.
    pub fn thinned(mut self, max_samples: usize) -> Self {
        let n = self.samples.len();
        if max_samples < 2 || n <= max_samples {
            return self;
        }
        let stride = (n - 1).div_ceil(max_samples - 1);
        let last = self.samples[n - 1];
        let mut kept: Vec<Sample> = self.samples.iter().copied().step_by(stride).collect();
        if kept.last().map(|s| s.t) != Some(last.t) {
            kept.push(last);
        }
        self.samples = kept;
        self
    }

    fn from_raw(
        raw: RawSolution<State3>,
        meta: TrajectoryMeta,
        s_of_t: impl Fn(f64) -> f64,
    ) -> Self {
        let samples = raw
            .times
            .iter()
            .zip(&raw.states)
            .map(|(&t, &state)| Sample {
                t,
                s: s_of_t(t),
                state,
            })
            .collect();
        Trajectory { samples, meta }
    }
}

fn check_span(t0: f64, t1: f64) -> Result<()> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::invalid(
            "span",
            format!("need finite t0 < t1, got [{t0}, {t1}]"),
        ));
    }
    Ok(())
}

fn adaptive_meta(
    config: &IntegratorConfig,
    raw: &RawSolution<State3>,
    mode: Option<IntegrationMode>,
) -> TrajectoryMeta {
    TrajectoryMeta {
        steps_taken: raw.accepted,
        steps_rejected: raw.rejected,
        method: Method::Rk45Adaptive,
        abs_tol: Some(config.abs_tol),
        rel_tol: Some(config.rel_tol),
        mode,
    }
}

/// Runs the adaptive pair on an arbitrary right-hand side; samples carry
/// s = t.
pub fn integrate_adaptive<F>(
    rhs: F,
    t0: f64,
    t1: f64,
    x0: State3,
    config: &IntegratorConfig,
    plan: &SamplingPlan,
) -> Result<Trajectory>
where
    F: Fn(f64, State3) -> State3,
{
    check_span(t0, t1)?;
    config.validate()?;
    let times = plan.sample_times(t0, t1)?;
    let output = match &times {
        Some(ts) => Output::At(ts),
        None => Output::EveryStep,
    };
    let h0 = config.initial_step_for(t1 - t0, plan.sample_count);
    run_adaptive(&rhs, t0, t1, x0, config, h0, output, None, |t| (t, t))
}

#[allow(clippy::too_many_arguments)]
fn run_adaptive<F, G>(
    rhs: &F,
    t0: f64,
    t1: f64,
    x0: State3,
    config: &IntegratorConfig,
    h0: f64,
    output: Output<'_>,
    mode: Option<IntegrationMode>,
    relabel: G,
) -> Result<Trajectory>
where
    F: Fn(f64, State3) -> State3,
    G: Fn(f64) -> (f64, f64),
{
    let build = |raw: RawSolution<State3>| {
        let meta = adaptive_meta(config, &raw, mode);
        let mut traj = Trajectory::from_raw(raw, meta, |_| 0.0);
        for sample in &mut traj.samples {
            let (t, s) = relabel(sample.t);
            sample.t = t;
            sample.s = s;
        }
        traj
    };
    match dopri5(rhs, t0, t1, x0, config, h0, output) {
        Ok(raw) => Ok(build(raw)),
        Err(failure) => Err(match failure.error {
            Error::MaxStepsExceeded {
                max_steps,
                t_reached,
                ..
            } => Error::MaxStepsExceeded {
                max_steps,
                t_reached: relabel(t_reached).0,
                partial: Some(Box::new(build(failure.partial))),
            },
            other => other,
        }),
    }
}

/// Integrates the gauged scaling-law system over `span = (t0, t1)`.
///
/// `DirectT` advances dx/dt = λ t^(−D) f(x); `ScaledS` advances
/// dx/ds = f(x) over [s(t0), s(t1)]. Samples carry both time columns.
pub fn integrate_sl(
    params: SystemParams,
    gauge: &Gauge,
    span: (f64, f64),
    x0: State3,
    config: &IntegratorConfig,
    plan: &SamplingPlan,
    mode: IntegrationMode,
) -> Result<Trajectory> {
    let (t0, t1) = span;
    if !(t0 > 0.0) {
        return Err(Error::GaugeSingularity { t: t0 });
    }
    check_span(t0, t1)?;
    config.validate()?;
    let s0 = scale_time(gauge, t0)?;
    let s1 = scale_time(gauge, t1)?;
    let gauge = *gauge;
    let direct_rhs = move |t: f64, x: State3| eval_sl_field(params, x) * gauge.weight(t);
    let scaled_rhs = move |_s: f64, x: State3| eval_sl_field(params, x);
    let s_of = move |t: f64| scale_time(&gauge, t).unwrap_or(f64::NAN);
    let t_of = move |s: f64| {
        if s == s0 {
            t0
        } else if s == s1 {
            t1
        } else {
            unscale_time(&gauge, s).unwrap_or(f64::NAN)
        }
    };

    match config.method {
        Method::Rk4Fixed => {
            let raw = match mode {
                IntegrationMode::DirectT => {
                    integrate_fixed_raw(&direct_rhs, t0, t1, x0, config.fixed_steps)?
                }
                IntegrationMode::ScaledS => {
                    integrate_fixed_raw(&scaled_rhs, s0, s1, x0, config.fixed_steps)?
                }
            };
            let meta = TrajectoryMeta {
                steps_taken: raw.accepted,
                steps_rejected: 0,
                method: Method::Rk4Fixed,
                abs_tol: None,
                rel_tol: None,
                mode: Some(mode),
            };
            Ok(match mode {
                IntegrationMode::DirectT => Trajectory::from_raw(raw, meta, s_of),
                IntegrationMode::ScaledS => {
                    let mut traj = Trajectory::from_raw(raw, meta, |s| s);
                    for sample in &mut traj.samples {
                        sample.t = t_of(sample.s);
                    }
                    traj
                }
            })
        }
        Method::Rk45Adaptive => {
            let t_samples = plan.sample_times(t0, t1)?;
            match mode {
                IntegrationMode::DirectT => {
                    let output = match &t_samples {
                        Some(ts) => Output::At(ts),
                        None => Output::EveryStep,
                    };
                    let h0 = config.initial_step_for(t1 - t0, plan.sample_count);
                    run_adaptive(
                        &direct_rhs,
                        t0,
                        t1,
                        x0,
                        config,
                        h0,
                        output,
                        Some(mode),
                        |t| (t, s_of(t)),
                    )
                }
                IntegrationMode::ScaledS => {
                    let s_samples: Option<Vec<f64>> = t_samples.as_ref().map(|ts| {
                        ts.iter()
                            .map(|&t| {
                                if t == t0 {
                                    s0
                                } else if t == t1 {
                                    s1
                                } else {
                                    s_of(t)
                                }
                            })
                            .collect()
                    });
                    let output = match &s_samples {
                        Some(ss) => Output::At(ss),
                        None => Output::EveryStep,
                    };
                    let h0 = config.initial_step_for(s1 - s0, plan.sample_count);
                    // Keep the requested t values verbatim where they exist.
                    let lookup = |s: f64| -> (f64, f64) {
                        if let (Some(ts), Some(ss)) = (&t_samples, &s_samples) {
                            if let Ok(i) = ss.binary_search_by(|v| v.total_cmp(&s)) {
                                return (ts[i], s);
                            }
                        }
                        (t_of(s), s)
                    };
                    run_adaptive(
                        &scaled_rhs,
                        s0,
                        s1,
                        x0,
                        config,
                        h0,
                        output,
                        Some(mode),
                        lookup,
                    )
                }
            }
        }
    }
}
