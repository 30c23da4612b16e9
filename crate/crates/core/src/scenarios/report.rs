use serde::Serialize;

use crate::analysis::{
    classify_equilibrium, conjecture_report, divergence_probe_field, max_lyapunov_field, Spectrum3,
    Stability, TimeVariable, DIVERGENCE_SAMPLES,
};
use crate::dynamics::{equilibria, SystemKind, SystemParams};
use crate::error::Result;
use crate::integrate::{IntegrationMode, Method, Trajectory};
use crate::state::State3;
use crate::timegauge::Gauge;

use super::Scenario;

/// Initial separation used for the divergence probe in reports.
pub const DIVERGENCE_OFFSET: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumEntry {
    pub point: State3,
    pub residual: f64,
    pub spectrum: Spectrum3,
    pub class: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEntry {
    pub lambda_max: f64,
    pub horizon: f64,
    pub renorm_interval: f64,
    pub time_variable: TimeVariable,
    pub sample_stddev: f64,
    pub intervals_used: usize,
    /// Slope of ln‖Δ‖ from a twin-trajectory run over the same horizon.
    pub divergence_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureEntry {
    pub verdict: String,
    pub witnesses: Vec<State3>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub samples: usize,
    pub steps: usize,
    pub rejected: usize,
    pub method: Method,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub mode: Option<IntegrationMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub scenario: String,
    pub system: SystemKind,
    pub params: SystemParams,
    pub gauge: Option<Gauge>,
    pub x0: State3,
    pub span: [f64; 2],
    pub equilibria: Vec<EquilibriumEntry>,
    pub lyapunov: LyapunovEntry,
    pub conjecture: ConjectureEntry,
    pub meta: RunMeta,
}

/// Equilibria with spectra, largest Lyapunov exponent (in s for SL), a
/// divergence probe on the same horizon, and the fixed-point check.
pub fn analyze(scenario: &Scenario, traj: &Trajectory) -> Result<AnalysisReport> {
    let system = scenario.system();
    let equilibria = equilibria(scenario.params)?
        .into_iter()
        .map(|e| {
            let (class, spectrum) = classify_equilibrium(&system, e.point)?;
            Ok(EquilibriumEntry {
                point: e.point,
                residual: e.residual_norm,
                spectrum,
                class,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let time_variable = if scenario.gauge.is_some() {
        TimeVariable::S
    } else {
        TimeVariable::T
    };
    let (horizon, renorm) = scenario.lyapunov_settings()?;
    let est = max_lyapunov_field(
        &system,
        scenario.x0,
        horizon,
        renorm,
        time_variable,
        &scenario.config,
    )?;
    let probe = divergence_probe_field(
        &system,
        scenario.x0,
        DIVERGENCE_OFFSET,
        horizon,
        time_variable,
        &scenario.config,
        DIVERGENCE_SAMPLES,
    )?;

    let conj = conjecture_report(scenario.params);
    Ok(AnalysisReport {
        scenario: scenario.name.clone(),
        system: scenario.kind,
        params: scenario.params,
        gauge: scenario.gauge,
        x0: scenario.x0,
        span: [scenario.span.0, scenario.span.1],
        equilibria,
        lyapunov: LyapunovEntry {
            lambda_max: est.lambda_max,
            horizon: est.horizon,
            renorm_interval: est.renorm_interval,
            time_variable: est.time_variable,
            sample_stddev: est.sample_stddev,
            intervals_used: est.intervals_used,
            divergence_slope: probe.fitted_slope(),
        },
        conjecture: ConjectureEntry {
            verdict: conj.verdict,
            witnesses: conj.equilibria_found.iter().map(|e| e.point).collect(),
        },
        meta: RunMeta {
            samples: traj.len(),
            steps: traj.meta.steps_taken,
            rejected: traj.meta.steps_rejected,
            method: traj.meta.method,
            abs_tol: traj.meta.abs_tol,
            rel_tol: traj.meta.rel_tol,
            mode: traj.meta.mode,
        },
    })
}
