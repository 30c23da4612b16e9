use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    LinearT,
    /// Log-spaced sample times; needs t0 > 0.
    GeometricT,
    /// One sample per accepted step.
    EveryStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub mode: SamplingMode,
    pub sample_count: usize,
}

impl SamplingPlan {
    pub const DEFAULT_COUNT: usize = 2000;

    pub fn linear(sample_count: usize) -> Self {
        Self {
            mode: SamplingMode::LinearT,
            sample_count,
        }
    }

    pub fn geometric(sample_count: usize) -> Self {
        Self {
            mode: SamplingMode::GeometricT,
            sample_count,
        }
    }

    pub fn every_step() -> Self {
        Self {
            mode: SamplingMode::EveryStep,
            sample_count: Self::DEFAULT_COUNT,
        }
    }

    /// Sample times over [t0, t1], endpoints exact. `None` means every step.
    pub fn sample_times(&self, t0: f64, t1: f64) -> Result<Option<Vec<f64>>> {
        if self.mode == SamplingMode::EveryStep {
            return Ok(None);
        }
        let n = self.sample_count;
        if n < 2 {
            return Err(Error::invalid("sample_count", "must be ≥ 2"));
        }
        let last = (n - 1) as f64;
        let times: Vec<f64> = match self.mode {
            SamplingMode::LinearT => (0..n)
                .map(|k| match k {
                    0 => t0,
                    k if k == n - 1 => t1,
                    k => t0 + (t1 - t0) * (k as f64 / last),
                })
                .collect(),
            SamplingMode::GeometricT => {
                if !(t0 > 0.0) {
                    return Err(Error::invalid("t0", "geometric sampling needs t0 > 0"));
                }
                let (l0, l1) = (t0.ln(), t1.ln());
                (0..n)
                    .map(|k| match k {
                        0 => t0,
                        k if k == n - 1 => t1,
                        k => (l0 + (l1 - l0) * (k as f64 / last)).exp(),
                    })
                    .collect()
            }
            SamplingMode::EveryStep => unreachable!(),
        };
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "sample_count",
                "sample times are not strictly increasing",
            ));
        }
        Ok(Some(times))
    }
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self::geometric(Self::DEFAULT_COUNT)
    }
}
