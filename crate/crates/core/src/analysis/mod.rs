//! Stability and chaos diagnostics.

mod eigen;
mod lyapunov;
mod newton;

use serde::{Deserialize, Serialize};

use crate::dynamics::{equilibria, Equilibrium, System, SystemKind, SystemParams, VectorField};
use crate::error::{Error, Result};
use crate::integrate::IntegratorConfig;
use crate::state::State3;
use crate::timegauge::Gauge;

pub use eigen::{char_residual, characteristic_poly, eigenvalues_3x3, Spectrum3};
pub use lyapunov::{
    divergence_probe_field, max_lyapunov_field, DivergenceSeries, LyapunovEstimate, TimeVariable,
    BENETTIN_OFFSET, GROWTH_FLOOR_FACTOR, SATURATION_SEPARATION, TRANSIENT_FRACTION,
    UNDERFLOW_SEPARATION,
};
pub use newton::{newton_fixed_point, MAX_NEWTON_ITERATIONS};

/// Real parts below this magnitude count as zero.
pub const MARGINAL_TOL: f64 = 1e-9;
/// Residual a point must meet to be classified.
pub const CLASSIFY_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    #[serde(rename = "stable node")]
    StableNode,
    #[serde(rename = "stable focus-node")]
    StableFocusNode,
    #[serde(rename = "unstable")]
    Unstable,
    #[serde(rename = "saddle")]
    Saddle,
    #[serde(rename = "marginal")]
    Marginal,
}

pub fn classify_spectrum(spectrum: &Spectrum3) -> Stability {
    let re = spectrum.values.map(|v| v.re);
    if re.iter().any(|r| r.abs() < MARGINAL_TOL) {
        Stability::Marginal
    } else if re.iter().all(|&r| r < 0.0) {
        if spectrum.is_real(0.0) {
            Stability::StableNode
        } else {
            Stability::StableFocusNode
        }
    } else if re.iter().all(|&r| r > 0.0) {
        Stability::Unstable
    } else {
        Stability::Saddle
    }
}

/// Linear stability of an equilibrium of `field`.
pub fn classify_equilibrium<F: VectorField + ?Sized>(
    field: &F,
    point: State3,
) -> Result<(Stability, Spectrum3)> {
    let residual = field.eval(point).norm();
    if !(residual <= CLASSIFY_RESIDUAL_TOL) {
        return Err(Error::NotAnEquilibrium { point, residual });
    }
    let spectrum = eigenvalues_3x3(&field.jacobian(point));
    Ok((classify_spectrum(&spectrum), spectrum))
}

fn time_variable_for(kind: SystemKind, gauge: Option<&Gauge>) -> TimeVariable {
    match (kind, gauge) {
        (SystemKind::Sl, Some(_)) => TimeVariable::S,
        _ => TimeVariable::T,
    }
}

/// Largest Lyapunov exponent; gauged scaling-law systems are measured in s,
/// where they are autonomous.
pub fn max_lyapunov(
    kind: SystemKind,
    params: SystemParams,
    gauge: Option<&Gauge>,
    x0: State3,
    horizon: f64,
    renorm_interval: f64,
) -> Result<LyapunovEstimate> {
    max_lyapunov_field(
        &System::new(kind, params),
        x0,
        horizon,
        renorm_interval,
        time_variable_for(kind, gauge),
        &IntegratorConfig::default(),
    )
}

pub const DIVERGENCE_SAMPLES: usize = 2000;

pub fn divergence_probe(
    kind: SystemKind,
    params: SystemParams,
    gauge: Option<&Gauge>,
    x0: State3,
    delta0: f64,
    horizon: f64,
) -> Result<DivergenceSeries> {
    divergence_probe_field(
        &System::new(kind, params),
        x0,
        delta0,
        horizon,
        time_variable_for(kind, gauge),
        &IntegratorConfig::default(),
        DIVERGENCE_SAMPLES,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub params: SystemParams,
    pub equilibria_found: Vec<Equilibrium>,
    pub verdict: String,
    pub note: String,
}

/// Constructive check that the system has at least one fixed point. Fixed
/// points are zeros of the gauge-free field, which the gauge weight cannot
/// move.
pub fn conjecture_report(params: SystemParams) -> ConjectureReport {
    let mut found = match equilibria(params) {
        Ok(eq) => eq,
        Err(_) => vec![Equilibrium {
            point: State3::ORIGIN,
            residual_norm: System::sl(params).eval(State3::ORIGIN).norm(),
            multiplicity_note: "origin (closed form unavailable for these coefficients)".into(),
        }],
    };
    found.retain(|e| e.residual_norm <= crate::dynamics::EQUILIBRIUM_RESIDUAL_TOL);
    let verdict = if found.is_empty() {
        "unresolved"
    } else {
        "satisfied"
    };
    ConjectureReport {
        params,
        equilibria_found: found,
        verdict: verdict.into(),
        note: "the origin is a fixed point for every (a, b, c) since f(0) = 0".into(),
    }
}
