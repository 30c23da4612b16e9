//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    classify_equilibrium, conjecture_report, divergence_probe_field, max_lyapunov_field, Spectrum3,
    Stability, TimeVariable, DIVERGENCE_SAMPLES,
};
use crate::dynamics::{equilibria, SystemKind, SystemParams};
use crate::error::{Error, Result};
use crate::export::read_csv;
use crate::integrate::{IntegrationMode, Method};
use crate::scenarios::{
    lookup, phase_plots, registry_listing, run_compare, run_scenario, run_sweep, Scenario,
    SweepParam, SweepSpec, TimeAxis, DIVERGENCE_OFFSET, SL_B, SL_C,
};
use crate::state::State3;
use crate::timegauge::Gauge;

#[derive(Debug, Parser)]
#[command(
    name = "slchaos",
    version,
    about = "Scaling-law and Lorenz chaotic system toolkit"
)]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Absolute and relative tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of output samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    /// Integration variable for SL systems
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Horizontal axis of SL time-series plots
    #[arg(long, global = true, value_enum, default_value = "s")]
    axis: AxisArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    DirectT,
    ScaledS,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    S,
    T,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SystemArg {
    Sl,
    LorenzLiteral,
    LorenzStandard,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List built-in scenarios
    List,
    /// Integrate a scenario and write CSV, JSON and SVG output
    Simulate(SystemArgs),
    /// Run a scenario once per parameter value
    Sweep {
        #[arg(long)]
        scenario: String,
        /// One of a, b, c, D, mu
        #[arg(long)]
        param: String,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        values: Vec<f64>,
    },
    /// Overlay two or more scenarios
    Compare {
        #[arg(required = true, num_args = 2..)]
        scenarios: Vec<String>,
    },
    /// Print equilibria and their stability as JSON
    FixedPoints(SystemArgs),
    /// Print the largest Lyapunov exponent as JSON
    Lyapunov {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        renorm: Option<f64>,
    },
    /// Render phase plots from a trajectory CSV
    Plot { input: PathBuf },
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Built-in scenario name (see `list`)
    #[arg(long, conflicts_with = "system")]
    scenario: Option<String>,
    /// Custom system instead of a built-in scenario
    #[arg(long, value_enum)]
    system: Option<SystemArg>,
    /// Coefficient a (SL only)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Coefficient b (SL only)
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Coefficient c (SL only)
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Gauge exponent D in (0, 1)
    #[arg(long = "D", allow_negative_numbers = true)]
    dim: Option<f64>,
    /// Gauge scale mu > 0
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Initial x
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Initial y
    #[arg(long, allow_negative_numbers = true)]
    y0: Option<f64>,
    /// Initial z
    #[arg(long, allow_negative_numbers = true)]
    z0: Option<f64>,
    /// Start time
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    /// End time
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
}

impl SystemArgs {
    fn scenario(&self) -> Result<Scenario> {
        let mut s = match (&self.scenario, self.system) {
            (Some(name), _) => {
                let coefficient_flags = [self.a, self.b, self.c, self.dim, self.mu];
                if coefficient_flags.iter().any(Option::is_some) {
                    return Err(Error::invalid(
                        "scenario",
                        "coefficients cannot be combined with --scenario",
                    ));
                }
                lookup(name)?
            }
            (None, Some(SystemArg::Sl)) => {
                let mut s = Scenario::sl("custom-sl", self.a.unwrap_or(2.0));
                s.params.b = self.b.unwrap_or(SL_B);
                s.params.c = self.c.unwrap_or(SL_C);
                let g = Gauge::default();
                s.gauge = Some(Gauge::new(
                    self.mu.unwrap_or(g.mu()),
                    self.dim.unwrap_or(g.dim()),
                )?);
                s
            }
            (None, Some(lorenz)) => {
                if [self.a, self.b, self.c, self.dim, self.mu]
                    .iter()
                    .any(Option::is_some)
                {
                    return Err(Error::invalid(
                        "system",
                        "Lorenz variants take no coefficients or gauge",
                    ));
                }
                let kind = match lorenz {
                    SystemArg::LorenzLiteral => SystemKind::LorenzLiteral,
                    _ => SystemKind::LorenzStandard,
                };
                let mut s = Scenario::lorenz(kind);
                s.name = format!("custom-{}", kind.as_str());
                s
            }
            (None, None) => return Err(Error::invalid("system", "pass --scenario or --system")),
        };
        let x0 = s.x0;
        s.x0 = State3::new(
            self.x0.unwrap_or(x0.x),
            self.y0.unwrap_or(x0.y),
            self.z0.unwrap_or(x0.z),
        );
        s.span = (self.t0.unwrap_or(s.span.0), self.t1.unwrap_or(s.span.1));
        Ok(s)
    }
}

impl Cli {
    fn apply_globals(&self, s: &mut Scenario) {
        if let Some(tol) = self.tol {
            s.config = s.config.with_tol(tol);
        }
        if let Some(n) = self.samples {
            s.plan.sample_count = n;
        }
        if let Some(m) = self.method {
            s.config.method = match m {
                MethodArg::Rk4 => Method::Rk4Fixed,
                MethodArg::Rk45 => Method::Rk45Adaptive,
            };
        }
        if let (Some(m), Some(_)) = (self.mode, s.gauge) {
            s.mode = match m {
                ModeArg::DirectT => IntegrationMode::DirectT,
                ModeArg::ScaledS => IntegrationMode::ScaledS,
            };
        }
    }

    fn axis(&self) -> TimeAxis {
        match self.axis {
            AxisArg::S => TimeAxis::S,
            AxisArg::T => TimeAxis::T,
        }
    }
}

#[derive(Serialize)]
struct FixedPointEntry {
    point: State3,
    residual: f64,
    spectrum: Spectrum3,
    class: Stability,
}

#[derive(Serialize)]
struct FixedPointsOutput {
    system: SystemKind,
    params: SystemParams,
    equilibria: Vec<FixedPointEntry>,
    conjecture: String,
}

#[derive(Serialize)]
struct LyapunovOutput {
    scenario: String,
    lambda_max: f64,
    horizon: f64,
    renorm_interval: f64,
    time_variable: TimeVariable,
    sample_stddev: f64,
    intervals_used: usize,
    divergence_slope: Option<f64>,
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::List => {
            out.write_all(registry_listing().as_bytes())?;
        }
        Command::Simulate(args) => {
            let mut s = args.scenario()?;
            cli.apply_globals(&mut s);
            let run = run_scenario(&s, &cli.out)?;
            for f in &run.files {
                writeln!(out, "{}", f.display())?;
            }
        }
        Command::Sweep {
            scenario,
            param,
            values,
        } => {
            let mut base = lookup(scenario)?;
            cli.apply_globals(&mut base);
            let spec = SweepSpec::new(base, param.parse::<SweepParam>()?, values.clone())?;
            let summary = run_sweep(&spec, &cli.out)?;
            for m in &summary.members {
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    m.directory,
                    m.status,
                    m.error.as_deref().unwrap_or("")
                )?;
            }
        }
        Command::Compare { scenarios } => {
            let list = scenarios
                .iter()
                .map(|n| {
                    let mut s = lookup(n)?;
                    cli.apply_globals(&mut s);
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()?;
            for f in run_compare(&list, &cli.out, cli.axis())? {
                writeln!(out, "{}", f.display())?;
            }
        }
        Command::FixedPoints(args) => {
            let s = args.scenario()?;
            s.validate()?;
            let system = s.system();
            let equilibria = equilibria(s.params)?
                .into_iter()
                .map(|e| {
                    let (class, spectrum) = classify_equilibrium(&system, e.point)?;
                    Ok(FixedPointEntry {
                        point: e.point,
                        residual: e.residual_norm,
                        spectrum,
                        class,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            print_json(
                out,
                &FixedPointsOutput {
                    system: s.kind,
                    params: s.params,
                    equilibria,
                    conjecture: conjecture_report(s.params).verdict,
                },
            )?;
        }
        Command::Lyapunov {
            system,
            horizon,
            renorm,
        } => {
            let mut s = system.scenario()?;
            cli.apply_globals(&mut s);
            let (h, r) = s.lyapunov_settings()?;
            let (h, r) = (horizon.unwrap_or(h), renorm.unwrap_or(r));
            let tv = if s.gauge.is_some() {
                TimeVariable::S
            } else {
                TimeVariable::T
            };
            let field = s.system();
            let est = max_lyapunov_field(&field, s.x0, h, r, tv, &s.config)?;
            let probe = divergence_probe_field(
                &field,
                s.x0,
                DIVERGENCE_OFFSET,
                h,
                tv,
                &s.config,
                DIVERGENCE_SAMPLES,
            )?;
            print_json(
                out,
                &LyapunovOutput {
                    scenario: s.name,
                    lambda_max: est.lambda_max,
                    horizon: est.horizon,
                    renorm_interval: est.renorm_interval,
                    time_variable: est.time_variable,
                    sample_stddev: est.sample_stddev,
                    intervals_used: est.intervals_used,
                    divergence_slope: probe.fitted_slope(),
                },
            )?;
        }
        Command::Plot { input } => {
            let samples = read_csv(input)?;
            if samples.is_empty() {
                return Err(Error::invalid("input", "no samples"));
            }
            let name = input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("trajectory");
            for f in phase_plots(name, &samples, &cli.out)? {
                writeln!(out, "{}", f.display())?;
            }
        }
    }
    Ok(())
}

/// 0 on success, 1 for usage and input errors, 2 for numerical or I/O
/// failures.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() || matches!(err, Error::Io(_) | Error::Json(_)) {
        2
    } else {
        1
    }
}

/// Parses `argv` (including the program name) and runs the command,
/// writing normal output to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
