//! Trajectory CSV: header `t,s,x,y,z`, LF line endings, shortest
//! round-trip float text.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrate::{Sample, Trajectory};
use crate::state::State3;

pub const HEADER: &str = "t,s,x,y,z";

/// Shortest decimal text that parses back to the same `f64`. Very small or
/// very large magnitudes switch to exponent notation.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_csv<W: Write>(traj: &Trajectory, mut out: W) -> Result<()> {
    if traj.is_empty() {
        return Err(Error::invalid(
            "trajectory",
            "cannot export an empty trajectory",
        ));
    }
    let mut buf = String::with_capacity(64 * (traj.len() + 1));
    buf.push_str(HEADER);
    buf.push('\n');
    for s in &traj.samples {
        let row = [s.t, s.s, s.state.x, s.state.y, s.state.z]
            .map(format_float)
            .join(",");
        buf.push_str(&row);
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn export_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut bytes = Vec::new();
    write_csv(traj, &mut bytes)?;
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    let text = fs::read_to_string(path)?;
    let bad = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        other => return Err(bad(format!("expected header `{HEADER}`, found {other:?}"))),
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("line {}: {e}", i + 2)))?;
        let [t, s, x, y, z] = fields[..] else {
            return Err(bad(format!("line {}: expected 5 fields", i + 2)));
        };
        samples.push(Sample {
            t,
            s,
            state: State3::new(x, y, z),
        });
    }
    Ok(samples)
}
