//! Mandelbrot scaling law and the time gauge it induces.
//!
//! The scaling-law derivative `(t^D / λ) d/dt` turns `(t^D/λ) x' = f(x)` into
//! `x' = λ t^(−D) f(x)`. Under `s = μ t^(1−D)` one has `ds/dt = λ t^(−D)`, so
//! the gauged system is the autonomous `dx/ds = f(x)` in disguise.

use serde::{Deserialize, Serialize};

use crate::dynamics::{eval_sl_field, SystemParams};
use crate::error::{Error, Result};
use crate::state::State3;

pub const DEFAULT_MU: f64 = 0.9;
pub const DEFAULT_D: f64 = 2.0 / 3.0;

/// Scaling-law parameters (μ, D) with λ = μ(1 − D) derived on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gauge {
    mu: f64,
    #[serde(rename = "D")]
    dim: f64,
    lambda: f64,
}

impl Gauge {
    pub fn new(mu: f64, dim: f64) -> Result<Self> {
        let lambda = lambda_coeff(mu, dim)?;
        Ok(Self { mu, dim, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Fractal dimension D.
    pub fn dim(&self) -> f64 {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Weight λ·t^(−D) = ds/dt, without the domain check.
    pub(crate) fn weight(&self, t: f64) -> f64 {
        self.lambda * (-self.dim * t.ln()).exp()
    }
}

impl Default for Gauge {
    fn default() -> Self {
        Gauge::new(DEFAULT_MU, DEFAULT_D).expect("default gauge is valid")
    }
}

impl<'de> Deserialize<'de> for Gauge {
    fn deserialize<De: serde::Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        #[derive(Deserialize)]
        struct Raw {
            mu: f64,
            #[serde(rename = "D")]
            dim: f64,
        }
        let raw = Raw::deserialize(de)?;
        Gauge::new(raw.mu, raw.dim).map_err(serde::de::Error::custom)
    }
}

pub fn lambda_coeff(mu: f64, dim: f64) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::invalid("mu", format!("must be > 0, got {mu}")));
    }
    if !(dim > 0.0 && dim < 1.0) {
        return Err(Error::invalid(
            "D",
            format!("must lie in (0, 1), got {dim}"),
        ));
    }
    Ok(mu * (1.0 - dim))
}

/// s = Λ(μ, D, t) = μ t^(1−D).
pub fn scale_time(gauge: &Gauge, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(
            "t",
            format!("must be finite and ≥ 0, got {t}"),
        ));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(gauge.mu * ((1.0 - gauge.dim) * t.ln()).exp())
}

/// t = (s/μ)^(1/(1−D)).
pub fn unscale_time(gauge: &Gauge, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid(
            "s",
            format!("must be finite and ≥ 0, got {s}"),
        ));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(((s / gauge.mu).ln() / (1.0 - gauge.dim)).exp())
}

/// Right-hand side of the gauged system, λ t^(−D) f(x).
pub fn msl_rhs(params: SystemParams, gauge: &Gauge, t: f64, state: State3) -> Result<State3> {
    if !(t > 0.0) {
        return Err(Error::GaugeSingularity { t });
    }
    Ok(eval_sl_field(params, state) * gauge.weight(t))
}
