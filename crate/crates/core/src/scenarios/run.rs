use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Stability;
use crate::dynamics::SystemKind;
use crate::error::{Error, Result};
use crate::export::{isometric, render_svg, PlotStyle, Series, COLORS};
use crate::integrate::{Sample, Trajectory};
use crate::state::State3;

use super::report::{analyze, AnalysisReport};
use super::{lookup, Scenario, SweepParam, SweepSpec};

pub const SWEEP_SUMMARY_FILE: &str = "summary.json";

/// Horizontal axis for SL time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeAxis {
    #[default]
    S,
    /// log10(t)
    T,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub files: Vec<PathBuf>,
    pub trajectory: Trajectory,
    pub report: AnalysisReport,
}

/// Writes files in order; on the first failure removes everything already
/// written.
fn write_all(files: Vec<(PathBuf, Vec<u8>)>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        if let Err(e) = fs::write(&path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(e.into());
        }
        written.push(path);
    }
    Ok(written)
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

const PLANES: [(&str, usize, usize); 3] = [("xy", 0, 1), ("xz", 0, 2), ("yz", 1, 2)];
const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

fn projected(states: &[State3], view: Option<(usize, usize)>) -> Vec<(f64, f64)> {
    states
        .iter()
        .map(|&s| match view {
            Some((i, j)) => (s[i], s[j]),
            None => isometric(s),
        })
        .collect()
}

/// The 3D projection plus the three coordinate planes, as `(suffix, svg)`.
fn phase_svgs(title: &str, curves: &[(String, Vec<State3>)]) -> Result<Vec<(String, String)>> {
    let series_for = |view: Option<(usize, usize)>| -> Vec<Series> {
        curves
            .iter()
            .enumerate()
            .map(|(k, (label, states))| Series {
                label: if curves.len() > 1 {
                    label.clone()
                } else {
                    String::new()
                },
                color: COLORS[k % COLORS.len()].to_string(),
                points: projected(states, view),
            })
            .collect()
    };
    let mut out = Vec::with_capacity(4);
    let style = PlotStyle {
        title: format!("{title}: 3D projection"),
        x_label: "(x - y) cos 30".into(),
        y_label: "z - (x + y) sin 30".into(),
    };
    out.push(("3d".to_string(), render_svg(&series_for(None), &style)?));
    for (suffix, i, j) in PLANES {
        let style = PlotStyle {
            title: format!("{title}: {}-{} plane", AXIS_NAMES[i], AXIS_NAMES[j]),
            x_label: AXIS_NAMES[i].into(),
            y_label: AXIS_NAMES[j].into(),
        };
        out.push((
            suffix.to_string(),
            render_svg(&series_for(Some((i, j))), &style)?,
        ));
    }
    Ok(out)
}

/// Writes `<name>-3d.svg`, `<name>-xy.svg`, `<name>-xz.svg`, `<name>-yz.svg`.
pub fn phase_plots(name: &str, samples: &[Sample], out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let states: Vec<State3> = samples.iter().map(|s| s.state).collect();
    let files = phase_svgs(name, &[(name.to_string(), states)])?
        .into_iter()
        .map(|(suffix, svg)| {
            (
                out_dir.join(format!("{name}-{suffix}.svg")),
                svg.into_bytes(),
            )
        })
        .collect();
    write_all(files)
}

/// Integrates, analyzes and writes `<name>.csv`, `<name>.json` and the four
/// phase plots into `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<ScenarioRun> {
    let trajectory = scenario.integrate()?;
    let report = analyze(scenario, &trajectory)?;
    fs::create_dir_all(out_dir)?;

    let name = &scenario.name;
    let mut csv = Vec::new();
    crate::export::write_csv(&trajectory, &mut csv)?;
    let mut files = vec![
        (out_dir.join(format!("{name}.csv")), csv),
        (out_dir.join(format!("{name}.json")), json_bytes(&report)?),
    ];
    let states: Vec<State3> = trajectory.states().collect();
    for (suffix, svg) in phase_svgs(name, &[(name.clone(), states)])? {
        files.push((
            out_dir.join(format!("{name}-{suffix}.svg")),
            svg.into_bytes(),
        ));
    }
    let files = write_all(files)?;
    Ok(ScenarioRun {
        files,
        trajectory,
        report,
    })
}

pub fn run_named(name: &str, out_dir: &Path) -> Result<ScenarioRun> {
    run_scenario(&lookup(name)?, out_dir)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMember {
    pub value: f64,
    pub directory: String,
    pub status: String,
    pub error: Option<String>,
    pub gauge_lambda: Option<f64>,
    pub final_state: Option<State3>,
    pub lambda_max: Option<f64>,
    pub classifications: Vec<Stability>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub base: String,
    pub parameter: SweepParam,
    pub members: Vec<SweepMember>,
}

/// One run per value in its own subdirectory, executed in parallel, plus
/// `summary.json` in input order. Member failures are recorded, not raised.
pub fn run_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<SweepSummary> {
    fs::create_dir_all(out_dir)?;
    let members: Vec<SweepMember> = spec
        .values
        .par_iter()
        .enumerate()
        .map(|(idx, &value)| {
            let directory = format!("{idx:02}-{}-{value}", spec.parameter);
            let outcome = spec.member(value).and_then(|scenario| {
                Ok((
                    run_scenario(&scenario, &out_dir.join(&directory))?,
                    scenario,
                ))
            });
            match outcome {
                Ok((run, scenario)) => SweepMember {
                    value,
                    directory,
                    status: "ok".into(),
                    error: None,
                    gauge_lambda: scenario.gauge.map(|g| g.lambda()),
                    final_state: run.trajectory.final_state(),
                    lambda_max: Some(run.report.lyapunov.lambda_max),
                    classifications: run.report.equilibria.iter().map(|e| e.class).collect(),
                },
                Err(e) => SweepMember {
                    value,
                    directory,
                    status: "failed".into(),
                    error: Some(e.to_string()),
                    gauge_lambda: spec
                        .member(value)
                        .ok()
                        .and_then(|s| s.gauge)
                        .map(|g| g.lambda()),
                    final_state: None,
                    lambda_max: None,
                    classifications: Vec::new(),
                },
            }
        })
        .collect();
    let summary = SweepSummary {
        base: spec.base.name.clone(),
        parameter: spec.parameter,
        members,
    };
    write_all(vec![(
        out_dir.join(SWEEP_SUMMARY_FILE),
        json_bytes(&summary)?,
    )])?;
    Ok(summary)
}

fn time_axis_label(kind: SystemKind, axis: TimeAxis) -> &'static str {
    match (kind, axis) {
        (SystemKind::Sl, TimeAxis::S) => "s",
        (SystemKind::Sl, TimeAxis::T) => "log10(t)",
        _ => "t",
    }
}

fn time_coordinate(kind: SystemKind, axis: TimeAxis, sample: &Sample) -> f64 {
    match (kind, axis) {
        (SystemKind::Sl, TimeAxis::S) => sample.s,
        (SystemKind::Sl, TimeAxis::T) => sample.t.log10(),
        _ => sample.t,
    }
}

/// Overlays of the 3D projection, the three planes and x, y, z time
/// series. Colors follow argument order: green, red, blue, then the rest of
/// [`COLORS`].
pub fn run_compare(scenarios: &[Scenario], out_dir: &Path, axis: TimeAxis) -> Result<Vec<PathBuf>> {
    if scenarios.len() < 2 {
        return Err(Error::invalid(
            "scenarios",
            "compare needs at least two scenarios",
        ));
    }
    let trajectories = scenarios
        .par_iter()
        .map(|s| s.integrate())
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(out_dir)?;

    let curves: Vec<(String, Vec<State3>)> = scenarios
        .iter()
        .zip(&trajectories)
        .map(|(s, t)| (s.name.clone(), t.states().collect()))
        .collect();
    let mut files: Vec<(PathBuf, Vec<u8>)> = phase_svgs("compare", &curves)?
        .into_iter()
        .map(|(suffix, svg)| {
            (
                out_dir.join(format!("compare-{suffix}.svg")),
                svg.into_bytes(),
            )
        })
        .collect();

    // time axis label: one variable, or each variable with its scenarios
    let mut groups: Vec<(&str, Vec<&str>)> = Vec::new();
    for s in scenarios {
        let label = time_axis_label(s.kind, axis);
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => g.1.push(&s.name),
            None => groups.push((label, vec![&s.name])),
        }
    }
    let x_label = if groups.len() == 1 {
        groups[0].0.to_string()
    } else {
        groups
            .iter()
            .map(|(label, names)| format!("{label} ({})", names.join(", ")))
            .collect::<Vec<_>>()
            .join("; ")
    };

    for (i, comp) in AXIS_NAMES.iter().enumerate() {
        let series: Vec<Series> = scenarios
            .iter()
            .zip(&trajectories)
            .enumerate()
            .map(|(k, (s, traj))| Series {
                label: s.name.clone(),
                color: COLORS[k % COLORS.len()].to_string(),
                points: traj
                    .samples
                    .iter()
                    .map(|p| (time_coordinate(s.kind, axis, p), p.state[i]))
                    .collect(),
            })
            .collect();
        let style = PlotStyle {
            title: format!("compare: {comp} time series"),
            x_label: x_label.clone(),
            y_label: comp.to_string(),
        };
        files.push((
            out_dir.join(format!("compare-series-{comp}.svg")),
            render_svg(&series, &style)?.into_bytes(),
        ));
    }
    write_all(files)
}
