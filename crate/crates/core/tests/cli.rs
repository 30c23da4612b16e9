use std::fs;
use std::path::Path;

use slchaos::cli::run;
use slchaos::export::read_csv;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("slchaos").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn names(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn simulate_named_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let (code, stdout, _) = cli(&[
        "simulate",
        "--scenario",
        "sl-a2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 6);
    assert_eq!(
        names(&out),
        [
            "sl-a2-3d.svg",
            "sl-a2-xy.svg",
            "sl-a2-xz.svg",
            "sl-a2-yz.svg",
            "sl-a2.csv",
            "sl-a2.json"
        ]
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sl-a2.json")).unwrap()).unwrap();
    for key in [
        "scenario",
        "params",
        "gauge",
        "equilibria",
        "lyapunov",
        "meta",
    ] {
        assert!(report.get(key).is_some(), "{key}");
    }
    assert_eq!(report["equilibria"][0]["class"], "stable node");
    assert_eq!(report["lyapunov"]["time_variable"], "s");
    assert_eq!(report["meta"]["mode"], "scaled-s");
    assert_eq!(report["gauge"]["D"].as_f64().unwrap(), 2.0 / 3.0);
}

#[test]
fn unknown_scenario_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = cli(&[
        "simulate",
        "--scenario",
        "nope",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("nope"));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&["--bogus"]).0, 1);
    assert_eq!(cli(&[]).0, 1);
    assert_eq!(cli(&["simulate"]).0, 1);
    assert_eq!(cli(&["simulate", "--system", "sl", "--c", "0"]).0, 1);
    assert_eq!(cli(&["simulate", "--system", "sl", "--t0", "0"]).0, 1);
    assert_eq!(
        cli(&["simulate", "--system", "lorenz-standard", "--a", "3"]).0,
        1
    );
    assert_eq!(
        cli(&["simulate", "--method", "euler", "--system", "sl"]).0,
        1
    );
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    for sub in [
        "list",
        "simulate",
        "sweep",
        "compare",
        "fixed-points",
        "lyapunov",
        "plot",
    ] {
        assert!(out.contains(sub), "{sub}");
    }
}

#[test]
fn numerical_failure_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = cli(&[
        "simulate",
        "--system",
        "lorenz-standard",
        "--x0",
        "1e200",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(names(tmp.path()).is_empty());
}

#[test]
fn fixed_points_json() {
    let (code, out, _) = cli(&[
        "fixed-points",
        "--system",
        "sl",
        "--a",
        "2",
        "--b",
        "0.3",
        "--c",
        "27",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let eq = v["equilibria"].as_array().unwrap();
    assert_eq!(eq.len(), 1);
    assert_eq!(
        eq[0]["point"],
        serde_json::json!({"x": 0.0, "y": 0.0, "z": 0.0})
    );
    assert_eq!(eq[0]["class"], "stable node");
    assert_eq!(v["conjecture"], "satisfied");

    let (code, out, _) = cli(&["fixed-points", "--scenario", "lorenz-standard"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equilibria"].as_array().unwrap().len(), 3);
    assert_eq!(v["equilibria"][0]["class"], "saddle");
}

#[test]
fn list_output() {
    let (code, out, _) = cli(&["list"]);
    assert_eq!(code, 0);
    assert_eq!(out, slchaos::scenarios::registry_listing());
    assert!(out.starts_with("sl-a2.35 "));
    assert!(out.contains("a=47/20 b=3/10 c=27 mu=9/10 D=2/3"));
}

#[test]
fn lyapunov_command() {
    let (code, out, err) = cli(&[
        "lyapunov",
        "--scenario",
        "lorenz-standard",
        "--horizon",
        "200",
        "--renorm",
        "0.5",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["lambda_max"].as_f64().unwrap() > 0.5);
    assert_eq!(v["time_variable"], "t");
    assert_eq!(
        cli(&[
            "lyapunov",
            "--scenario",
            "lorenz-standard",
            "--horizon",
            "10",
            "--renorm",
            "0.5"
        ])
        .0,
        1
    );
}

#[test]
fn modes_and_methods_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |flags: &[&str], sub: &str| {
        let dir = tmp.path().join(sub);
        let mut args = vec![
            "simulate",
            "--system",
            "sl",
            "--t1",
            "1000",
            "--samples",
            "50",
            "--out",
            dir.to_str().unwrap(),
        ];
        args.extend_from_slice(flags);
        let (code, _, err) = cli(&args);
        assert_eq!(code, 0, "{err}");
        read_csv(&dir.join("custom-sl.csv")).unwrap()
    };
    let scaled = read(&["--mode", "scaled-s"], "a");
    let direct = read(&["--mode", "direct-t"], "b");
    let fixed = read(&["--method", "rk4"], "c");
    assert_eq!(scaled.len(), 50);
    assert!(fixed.len() <= 50 && fixed.len() >= 2);
    for (a, b) in scaled.iter().zip(&direct) {
        assert_eq!(a.t, b.t);
        assert!((a.state - b.state).max_abs() < 1e-6);
    }
    let end = |v: &[slchaos::integrate::Sample]| v.last().unwrap().state;
    assert!((end(&scaled) - end(&fixed)).max_abs() < 1e-6);
}

#[test]
fn sweep_over_a() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    let (code, _, err) = cli(&[
        "sweep",
        "--scenario",
        "sl-a2",
        "--param",
        "a",
        "--values",
        "2.35,2,1.5,1.35",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        names(out),
        [
            "00-a-2.35",
            "01-a-2",
            "02-a-1.5",
            "03-a-1.35",
            "summary.json"
        ]
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let values: Vec<f64> = v["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values, [2.35, 2.0, 1.5, 1.35]);
    for m in v["members"].as_array().unwrap() {
        assert_eq!(m["status"], "ok");
        assert!(m["lambda_max"].as_f64().unwrap() < 0.0);
        assert_eq!(m["classifications"], serde_json::json!(["stable node"]));
        assert!(m["final_state"].is_object());
    }
}

#[test]
fn sweep_gauge_dimension() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = cli(&[
        "sweep",
        "--scenario",
        "sl-a2",
        "--param",
        "D",
        "--values",
        "0.5,0.6666666666666666,0.9",
        "--samples",
        "100",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary.json")).unwrap())
            .unwrap();
    let lambdas: Vec<f64> = v["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["gauge_lambda"].as_f64().unwrap())
        .collect();
    for (got, want) in lambdas.iter().zip([0.45, 0.3, 0.09]) {
        assert!((got - want).abs() < 1e-15);
    }
    assert_eq!(
        cli(&[
            "sweep",
            "--scenario",
            "sl-a2",
            "--param",
            "D",
            "--values",
            "1.5",
            "--out",
            tmp.path().to_str().unwrap()
        ])
        .0,
        1
    );
    assert_eq!(
        cli(&[
            "sweep",
            "--scenario",
            "sl-a2",
            "--param",
            "q",
            "--values",
            "1",
            "--out",
            tmp.path().to_str().unwrap()
        ])
        .0,
        1
    );
}

#[test]
fn single_value_sweep_matches_plain_run() {
    let tmp = tempfile::tempdir().unwrap();
    let plain = tmp.path().join("plain");
    let sweep = tmp.path().join("sweep");
    assert_eq!(
        cli(&[
            "simulate",
            "--scenario",
            "sl-a1.5",
            "--samples",
            "200",
            "--out",
            plain.to_str().unwrap()
        ])
        .0,
        0
    );
    assert_eq!(
        cli(&[
            "sweep",
            "--scenario",
            "sl-a1.5",
            "--param",
            "a",
            "--values",
            "1.5",
            "--samples",
            "200",
            "--out",
            sweep.to_str().unwrap()
        ])
        .0,
        0
    );
    let member = sweep.join("00-a-1.5");
    assert_eq!(names(&plain), names(&member));
    for f in names(&plain) {
        assert_eq!(
            fs::read(plain.join(&f)).unwrap(),
            fs::read(member.join(&f)).unwrap(),
            "{f}"
        );
    }
    assert!(sweep.join("summary.json").exists());
}

fn legend(svg: &str) -> Vec<String> {
    svg.lines()
        .filter(|l| l.starts_with("<text class=\"legend\""))
        .map(|l| {
            l.rsplit_once("\">")
                .unwrap()
                .1
                .trim_end_matches("</text>")
                .to_string()
        })
        .collect()
}

fn strokes(svg: &str) -> Vec<String> {
    svg.lines()
        .filter(|l| l.starts_with("<polyline"))
        .map(|l| {
            l.split("stroke=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap()
                .to_string()
        })
        .collect()
}

#[test]
fn compare_overlays() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    let (code, _, err) = cli(&[
        "compare",
        "sl-a2.35",
        "sl-a2",
        "lorenz-standard",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        names(out),
        [
            "compare-3d.svg",
            "compare-series-x.svg",
            "compare-series-y.svg",
            "compare-series-z.svg",
            "compare-xy.svg",
            "compare-xz.svg",
            "compare-yz.svg"
        ]
    );
    let xy = fs::read_to_string(out.join("compare-xy.svg")).unwrap();
    assert_eq!(legend(&xy), ["sl-a2.35", "sl-a2", "lorenz-standard"]);
    assert_eq!(strokes(&xy), ["green", "red", "blue"]);
    let series = fs::read_to_string(out.join("compare-series-x.svg")).unwrap();
    assert!(series.contains(">s (sl-a2.35, sl-a2); t (lorenz-standard)</text>"));

    let (code, _, _) = cli(&[
        "compare",
        "sl-a2",
        "sl-a1.5",
        "--axis",
        "t",
        "--out",
        out.join("t").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let series = fs::read_to_string(out.join("t/compare-series-z.svg")).unwrap();
    assert!(series.contains(">log10(t)</text>"));

    assert_eq!(
        cli(&["compare", "sl-a2", "--out", out.to_str().unwrap()]).0,
        1
    );
}

#[test]
fn compare_with_itself() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        cli(&[
            "compare",
            "lorenz-literal",
            "lorenz-literal",
            "--out",
            tmp.path().to_str().unwrap()
        ])
        .0,
        0
    );
    let svg = fs::read_to_string(tmp.path().join("compare-xz.svg")).unwrap();
    let pts: Vec<&str> = svg
        .lines()
        .filter(|l| l.starts_with("<polyline"))
        .map(|l| l.split("points=").nth(1).unwrap())
        .collect();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0], pts[1]);
}

#[test]
fn plot_from_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    assert_eq!(
        cli(&[
            "simulate",
            "--scenario",
            "lorenz-literal",
            "--out",
            run.to_str().unwrap()
        ])
        .0,
        0
    );
    let plots = tmp.path().join("plots");
    let csv = run.join("lorenz-literal.csv");
    let (code, _, err) = cli(&[
        "plot",
        csv.to_str().unwrap(),
        "--out",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    for suffix in ["3d", "xy", "xz", "yz"] {
        let f = format!("lorenz-literal-{suffix}.svg");
        assert_eq!(
            fs::read(plots.join(&f)).unwrap(),
            fs::read(run.join(&f)).unwrap()
        );
    }
    assert_eq!(
        cli(&["plot", "missing.csv", "--out", plots.to_str().unwrap()]).0,
        2
    );
}
