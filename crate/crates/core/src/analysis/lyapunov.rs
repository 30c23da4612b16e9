//! Largest Lyapunov exponent by Benettin renormalization, and a twin
//! trajectory divergence probe.

use serde::{Deserialize, Serialize};

use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::integrate::{dopri5, IntegratorConfig, Output, SamplingPlan, TwinState};
use crate::state::State3;

/// Offset magnitude restored after every renormalization.
pub const BENETTIN_OFFSET: f64 = 1e-8;
/// Fraction of the horizon discarded as transient.
pub const TRANSIENT_FRACTION: f64 = 0.1;
/// Separation at which a divergence probe is considered saturated.
pub const SATURATION_SEPARATION: f64 = 1e-2;
/// Growth window starts once the separation leaves this multiple of δ0.
pub const GROWTH_FLOOR_FACTOR: f64 = 100.0;
/// A decaying probe stops once the separation drops below this, well
/// before it would leave the double range.
pub const UNDERFLOW_SEPARATION: f64 = 1e-200;
/// Minimum ratio horizon / renorm_interval.
pub const MIN_INTERVALS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeVariable {
    /// Physical time.
    #[serde(rename = "t")]
    T,
    /// Scaled time of a gauged system.
    #[serde(rename = "s")]
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub lambda_max: f64,
    pub horizon: f64,
    pub renorm_interval: f64,
    pub sample_stddev: f64,
    pub time_variable: TimeVariable,
    pub intervals_used: usize,
}

/// Benettin estimate of the largest exponent of `field` from `x0`.
///
/// The reference state and a tangent vector are advanced together; the
/// tangent is rescaled to [`BENETTIN_OFFSET`] every `renorm_interval` and the
/// logarithmic growth rates after the transient are averaged.
pub fn max_lyapunov_field<F: VectorField + ?Sized>(
    field: &F,
    x0: State3,
    horizon: f64,
    renorm_interval: f64,
    time_variable: TimeVariable,
    config: &IntegratorConfig,
) -> Result<LyapunovEstimate> {
    if !(renorm_interval > 0.0 && horizon > 0.0) {
        return Err(Error::invalid(
            "horizon",
            "horizon and renorm_interval must be > 0",
        ));
    }
    if horizon < MIN_INTERVALS * renorm_interval * (1.0 - 1e-12) {
        return Err(Error::invalid(
            "horizon",
            format!("need horizon ≥ {MIN_INTERVALS} · renorm_interval"),
        ));
    }
    config.validate()?;

    let rhs = |_t: f64, w: TwinState| TwinState {
        base: field.eval(w.base),
        offset: field.jacobian(w.base).mul_vec(w.offset),
    };
    let intervals = (horizon / renorm_interval).round() as usize;
    let discard_before = TRANSIENT_FRACTION * horizon;
    let mut state = TwinState {
        base: x0,
        offset: State3::new(1.0, 1.0, 1.0) * (BENETTIN_OFFSET / 3f64.sqrt()),
    };
    let mut h = config.initial_step.unwrap_or(1e-3 * renorm_interval);
    let mut rates = Vec::with_capacity(intervals);
    for k in 0..intervals {
        let t0 = k as f64 * renorm_interval;
        let t1 = (k + 1) as f64 * renorm_interval;
        let end = [t1];
        let raw = dopri5(&rhs, t0, t1, state, config, h, Output::At(&end)).map_err(|f| f.error)?;
        h = raw.last_step;
        state = *raw.states.last().expect("end sample");
        let grown = state.offset.norm();
        if !(grown > 0.0 && grown.is_finite()) {
            return Err(Error::NonFinite { step: k, t: t1 });
        }
        if t0 >= discard_before {
            rates.push((grown / BENETTIN_OFFSET).ln() / renorm_interval);
        }
        state.offset = state.offset * (BENETTIN_OFFSET / grown);
    }
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(LyapunovEstimate {
        lambda_max: mean,
        horizon,
        renorm_interval,
        sample_stddev: var.sqrt(),
        time_variable,
        intervals_used: rates.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSeries {
    pub time_variable: TimeVariable,
    /// (time, ‖Δ‖₂) pairs.
    pub points: Vec<(f64, f64)>,
}

impl DivergenceSeries {
    /// Least-squares slope of ln‖Δ‖ over the exponential-growth window.
    ///
    /// If the separation saturates (reaches [`SATURATION_SEPARATION`]), the
    /// window runs from the last time it was still within
    /// [`GROWTH_FLOOR_FACTOR`] of its initial size up to saturation. Otherwise
    /// the whole series after the transient is used. Either way the first
    /// [`TRANSIENT_FRACTION`] of the horizon is excluded.
    pub fn fitted_slope(&self) -> Option<f64> {
        let pts = &self.points;
        let (first, last) = (pts.first()?.0, pts.last()?.0);
        let d0 = pts[0].1;
        let transient_end = first + TRANSIENT_FRACTION * (last - first);
        let mut lo = pts.iter().position(|p| p.0 >= transient_end)?;
        let mut hi = pts.len();
        if let Some(sat) = pts[lo..].iter().position(|p| p.1 >= SATURATION_SEPARATION) {
            hi = lo + sat;
            if let Some(floor) = pts[lo..hi]
                .iter()
                .rposition(|p| p.1 <= GROWTH_FLOOR_FACTOR * d0)
            {
                lo += floor;
            }
        }
        let window: Vec<(f64, f64)> = pts[lo..hi]
            .iter()
            .filter(|p| p.1 > 0.0)
            .map(|&(t, d)| (t, d.ln()))
            .collect();
        if window.len() < 3 {
            return None;
        }
        let n = window.len() as f64;
        let mt = window.iter().map(|p| p.0).sum::<f64>() / n;
        let my = window.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = window.iter().map(|p| (p.0 - mt).powi(2)).sum();
        let sxy: f64 = window.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }
}

/// Twin trajectories from `x0` and `x0 + (delta0, 0, 0)`; the separation is
/// carried as its own state so it never suffers cancellation. The series is
/// cut short if the separation decays below [`UNDERFLOW_SEPARATION`].
pub fn divergence_probe_field<F: VectorField + ?Sized>(
    field: &F,
    x0: State3,
    delta0: f64,
    horizon: f64,
    time_variable: TimeVariable,
    config: &IntegratorConfig,
    sample_count: usize,
) -> Result<DivergenceSeries> {
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(Error::invalid("delta0", "must be > 0"));
    }
    if !(horizon > 0.0) {
        return Err(Error::invalid("horizon", "must be > 0"));
    }
    config.validate()?;
    let rhs = |_t: f64, w: TwinState| TwinState {
        base: field.eval(w.base),
        offset: field.difference(w.base, w.offset),
    };
    let times = SamplingPlan::linear(sample_count)
        .sample_times(0.0, horizon)?
        .expect("linear plan yields times");
    let start = TwinState {
        base: x0,
        offset: State3::new(delta0, 0.0, 0.0),
    };
    let mut h = config
        .initial_step
        .unwrap_or(1e-2 * horizon / sample_count as f64);
    let mut points = Vec::with_capacity(times.len());
    let mut state = start;
    let last = times.len() - 1;
    let mut i0 = 0;
    // one sample interval per call so the floor check is never far behind
    while i0 < last {
        let i1 = i0 + 1;
        let raw = dopri5(
            &rhs,
            times[i0],
            times[i1],
            state,
            config,
            h,
            Output::At(&times[i0..=i1]),
        )
        .map_err(|f| f.error)?;
        let skip = usize::from(i0 > 0);
        points.extend(
            raw.times
                .iter()
                .zip(&raw.states)
                .skip(skip)
                .map(|(&t, w)| (t, w.offset.norm())),
        );
        state = *raw.states.last().expect("segment end is sampled");
        h = raw.last_step;
        i0 = i1;
        if state.offset.norm() < UNDERFLOW_SEPARATION {
            break;
        }
    }
    Ok(DivergenceSeries {
        time_variable,
        points,
    })
}
