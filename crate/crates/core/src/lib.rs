//! Scaling-law chaotic system toolkit.
//!
//! Vector fields for the scaling-law system and two Lorenz baselines, a
//! time gauge that turns the scaling-law derivative into an autonomous ODE,
//! RK4 and adaptive Dormand–Prince integrators, stability and Lyapunov
//! diagnostics, and a scenario layer with CSV/JSON/SVG exporters and a CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod integrate;
pub mod scenarios;
pub mod state;
pub mod timegauge;

pub use dynamics::{Equilibrium, System, SystemKind, SystemParams, VectorField};
pub use error::{Error, Result};
pub use integrate::{
    IntegrationMode, IntegratorConfig, Method, SamplingMode, SamplingPlan, Trajectory,
};
pub use scenarios::{builtin_scenarios, Scenario};
pub use state::{Mat3, State3};
pub use timegauge::Gauge;
