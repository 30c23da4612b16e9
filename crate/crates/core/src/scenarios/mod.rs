//! Built-in parameter sets, scenario runs, sweeps and overlays.

mod report;
mod run;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::{System, SystemKind, SystemParams};
use crate::error::{Error, Result};
use crate::integrate::{
    integrate_adaptive, integrate_fixed, integrate_sl, IntegrationMode, IntegratorConfig, Method,
    SamplingPlan, Trajectory,
};
use crate::state::State3;
use crate::timegauge::{scale_time, Gauge};
use crate::VectorField;

pub use report::{
    analyze, AnalysisReport, ConjectureEntry, EquilibriumEntry, LyapunovEntry, RunMeta,
    DIVERGENCE_OFFSET,
};
pub use run::{
    phase_plots, run_compare, run_named, run_scenario, run_sweep, ScenarioRun, SweepMember,
    SweepSummary, TimeAxis, SWEEP_SUMMARY_FILE,
};

pub const SL_SPAN: (f64, f64) = (0.1, 1e6);
pub const LORENZ_SPAN: (f64, f64) = (0.0, 60.0);
pub const INITIAL_STATE: State3 = State3 {
    x: 0.1,
    y: 0.1,
    z: 0.1,
};
pub const SL_B: f64 = 3.0 / 10.0;
pub const SL_C: f64 = 27.0;
/// Lorenz reports use a fixed Lyapunov horizon well past the transient.
pub const LORENZ_LYAPUNOV: (f64, f64) = (1000.0, 0.5);
/// SL reports use the whole s-span split into this many intervals.
pub const SL_RENORM_INTERVALS: f64 = 200.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub kind: SystemKind,
    pub params: SystemParams,
    pub gauge: Option<Gauge>,
    pub x0: State3,
    pub span: (f64, f64),
    pub config: IntegratorConfig,
    pub plan: SamplingPlan,
    /// Only meaningful for gauged SL runs.
    pub mode: IntegrationMode,
    /// `(horizon, renorm_interval)`; `None` picks the default rule.
    pub lyapunov: Option<(f64, f64)>,
}

impl Scenario {
    pub fn sl(name: &str, a: f64) -> Self {
        Scenario {
            name: name.to_string(),
            kind: SystemKind::Sl,
            params: SystemParams {
                a,
                b: SL_B,
                c: SL_C,
            },
            gauge: Some(Gauge::default()),
            x0: INITIAL_STATE,
            span: SL_SPAN,
            config: IntegratorConfig::default(),
            plan: SamplingPlan::geometric(SamplingPlan::DEFAULT_COUNT),
            mode: IntegrationMode::ScaledS,
            lyapunov: None,
        }
    }

    pub fn lorenz(kind: SystemKind) -> Self {
        Scenario {
            name: kind.as_str().to_string(),
            kind,
            params: kind.field_params(SystemParams {
                a: 0.0,
                b: 0.0,
                c: 0.0,
            }),
            gauge: None,
            x0: INITIAL_STATE,
            span: LORENZ_SPAN,
            config: IntegratorConfig::default(),
            plan: SamplingPlan::linear(SamplingPlan::DEFAULT_COUNT),
            mode: IntegrationMode::DirectT,
            lyapunov: None,
        }
    }

    pub fn system(&self) -> System {
        System::new(self.kind, self.params)
    }

    pub fn validate(&self) -> Result<()> {
        let SystemParams { a, b, c } = self.params;
        if ![a, b, c].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("params", "coefficients must be finite"));
        }
        if !(c > 0.0) {
            return Err(Error::invalid("c", format!("must be positive, got {c}")));
        }
        if !self.x0.is_finite() {
            return Err(Error::invalid("x0", "initial state must be finite"));
        }
        let (t0, t1) = self.span;
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::invalid(
                "span",
                format!("need finite t0 < t1, got [{t0}, {t1}]"),
            ));
        }
        match (self.kind, &self.gauge) {
            (SystemKind::Sl, None) => {
                return Err(Error::invalid("gauge", "SL scenarios need a gauge"))
            }
            (SystemKind::Sl, Some(_)) if !(t0 > 0.0) => {
                return Err(Error::invalid(
                    "t0",
                    format!("SL spans must start at t0 > 0, got {t0}"),
                ))
            }
            (k, Some(_)) if k.is_lorenz() => {
                return Err(Error::invalid("gauge", "Lorenz scenarios take no gauge"))
            }
            _ => {}
        }
        if let Some((h, r)) = self.lyapunov {
            if !(r > 0.0 && h >= 100.0 * r) {
                return Err(Error::invalid(
                    "lyapunov",
                    "horizon must be at least 100 renorm intervals",
                ));
            }
        }
        self.config.validate()
    }

    /// Span in the variable the system is autonomous in: s for SL, t for
    /// Lorenz.
    pub fn autonomous_span(&self) -> Result<(f64, f64)> {
        match &self.gauge {
            Some(g) => Ok((scale_time(g, self.span.0)?, scale_time(g, self.span.1)?)),
            None => Ok(self.span),
        }
    }

    pub fn lyapunov_settings(&self) -> Result<(f64, f64)> {
        if let Some(l) = self.lyapunov {
            return Ok(l);
        }
        Ok(match self.kind {
            SystemKind::Sl => {
                let (s0, s1) = self.autonomous_span()?;
                let horizon = s1 - s0;
                (horizon, horizon / SL_RENORM_INTERVALS)
            }
            _ => LORENZ_LYAPUNOV,
        })
    }

    /// Integrates the scenario. Fixed-step runs are thinned to the plan's
    /// sample count.
    pub fn integrate(&self) -> Result<Trajectory> {
        self.validate()?;
        let (t0, t1) = self.span;
        let traj = match (&self.gauge, self.config.method) {
            (Some(g), _) => integrate_sl(
                self.params,
                g,
                self.span,
                self.x0,
                &self.config,
                &self.plan,
                self.mode,
            )?,
            (None, Method::Rk45Adaptive) => {
                let sys = self.system();
                integrate_adaptive(
                    |_, x| sys.eval(x),
                    t0,
                    t1,
                    self.x0,
                    &self.config,
                    &self.plan,
                )?
            }
            (None, Method::Rk4Fixed) => {
                let sys = self.system();
                integrate_fixed(|_, x| sys.eval(x), t0, t1, self.x0, self.config.fixed_steps)?
            }
        };
        Ok(match self.config.method {
            Method::Rk4Fixed => traj.thinned(self.plan.sample_count),
            Method::Rk45Adaptive => traj,
        })
    }
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        Scenario::sl("sl-a2.35", 47.0 / 20.0),
        Scenario::sl("sl-a2", 2.0),
        Scenario::sl("sl-a1.5", 3.0 / 2.0),
        Scenario::sl("sl-a1.35", 27.0 / 20.0),
        Scenario::lorenz(SystemKind::LorenzStandard),
        Scenario::lorenz(SystemKind::LorenzLiteral),
    ]
}

pub fn lookup(name: &str) -> Result<Scenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Smallest-denominator fraction (q ≤ 1000) equal to `v` in double
/// precision, else plain decimal text.
pub fn rational_text(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{v}");
    }
    for q in 2..=1000u32 {
        let p = (v * q as f64).round();
        if p / q as f64 == v {
            return format!("{p}/{q}");
        }
    }
    format!("{v}")
}

/// One line per built-in scenario; used by the `list` command.
pub fn registry_listing() -> String {
    let mut out = String::new();
    for s in builtin_scenarios() {
        let p = s.params;
        let gauge = match &s.gauge {
            Some(g) => format!("mu={} D={}", rational_text(g.mu()), rational_text(g.dim())),
            None => "no gauge".to_string(),
        };
        out.push_str(&format!(
            "{:<16} {:<16} a={} b={} c={} {} x0=({}, {}, {}) t=[{}, {}]\n",
            s.name,
            s.kind.as_str(),
            rational_text(p.a),
            rational_text(p.b),
            rational_text(p.c),
            gauge,
            s.x0.x,
            s.x0.y,
            s.x0.z,
            s.span.0,
            s.span.1,
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "mu")]
    Mu,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::A => "a",
            SweepParam::B => "b",
            SweepParam::C => "c",
            SweepParam::D => "D",
            SweepParam::Mu => "mu",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a" => SweepParam::A,
            "b" => SweepParam::B,
            "c" => SweepParam::C,
            "D" => SweepParam::D,
            "mu" => SweepParam::Mu,
            other => {
                return Err(Error::invalid(
                    "parameter",
                    format!("expected one of a, b, c, D, mu; got `{other}`"),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub parameter: SweepParam,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(base: Scenario, parameter: SweepParam, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("values", "sweep needs at least one value"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("non-finite value {v}")));
        }
        if base.kind.is_lorenz() {
            return Err(Error::invalid(
                "parameter",
                "Lorenz scenarios have fixed coefficients and no gauge",
            ));
        }
        let spec = SweepSpec {
            base,
            parameter,
            values,
        };
        // gauge invariants are checked up front
        if matches!(parameter, SweepParam::D | SweepParam::Mu) {
            for &v in &spec.values {
                spec.member(v)?;
            }
        }
        Ok(spec)
    }

    /// The base scenario with one parameter replaced. The name is kept so a
    /// member's artifacts match a plain run of the same parameters.
    pub fn member(&self, value: f64) -> Result<Scenario> {
        let mut s = self.base.clone();
        let gauge = s.gauge.unwrap_or_default();
        match self.parameter {
            SweepParam::A => s.params.a = value,
            SweepParam::B => s.params.b = value,
            SweepParam::C => s.params.c = value,
            SweepParam::D => s.gauge = Some(Gauge::new(gauge.mu(), value)?),
            SweepParam::Mu => s.gauge = Some(Gauge::new(value, gauge.dim())?),
        }
        Ok(s)
    }
}
