//! Minimal deterministic SVG line plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::state::State3;

pub const CANVAS_WIDTH: f64 = 800.0;
pub const CANVAS_HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.1;

/// Overlay colors in order; the first three follow the comparison
/// convention green, red, blue.
pub const COLORS: [&str; 6] = ["green", "red", "blue", "orange", "purple", "black"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

/// Isometric projection with z up.
pub fn isometric(s: State3) -> (f64, f64) {
    let c = 3f64.sqrt() / 2.0;
    ((s.x - s.y) * c, s.z - 0.5 * (s.x + s.y))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-3..1e4).contains(&a) {
        format!("{v:.3}")
    } else {
        format!("{v:.3e}")
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = 0.5 * lo.abs().max(1.0);
        (lo - pad, hi + pad)
    }
}

pub fn render_svg(series: &[Series], style: &PlotStyle) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::invalid(
            "series",
            "every series needs at least one point",
        ));
    }
    let all = || series.iter().flat_map(|s| s.points.iter());
    if all().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::invalid("series", "non-finite coordinate"));
    }
    let (xlo, xhi) = padded(
        all().map(|p| p.0).fold(f64::INFINITY, f64::min),
        all().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    let (ylo, yhi) = padded(
        all().map(|p| p.1).fold(f64::INFINITY, f64::min),
        all().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
    );

    let (w, h) = (CANVAS_WIDTH, CANVAS_HEIGHT);
    let (left, right) = (MARGIN * w, (1.0 - MARGIN) * w);
    let (top, bottom) = (MARGIN * h, (1.0 - MARGIN) * h);
    let px = |x: f64| left + (x - xlo) / (xhi - xlo) * (right - left);
    let py = |y: f64| bottom - (y - ylo) / (yhi - ylo) * (bottom - top);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        w / 2.0,
        top / 2.0 + 6.0,
        escape(&style.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    // min/max tick labels
    let font = r#"font-family="sans-serif" font-size="12""#;
    let _ = writeln!(
        out,
        r#"<text class="tick" x="{left}" y="{}" text-anchor="start" {font}>{}</text>"#,
        bottom + 16.0,
        tick(xlo)
    );
    let _ = writeln!(
        out,
        r#"<text class="tick" x="{right}" y="{}" text-anchor="end" {font}>{}</text>"#,
        bottom + 16.0,
        tick(xhi)
    );
    let _ = writeln!(
        out,
        r#"<text class="tick" x="{}" y="{bottom}" text-anchor="end" {font}>{}</text>"#,
        left - 4.0,
        tick(ylo)
    );
    let _ = writeln!(
        out,
        r#"<text class="tick" x="{}" y="{}" text-anchor="end" {font}>{}</text>"#,
        left - 4.0,
        top + 12.0,
        tick(yhi)
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        (left + right) / 2.0,
        bottom + 36.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 {} {})">{}</text>"#,
        left - 40.0,
        (top + bottom) / 2.0,
        left - 40.0,
        (top + bottom) / 2.0,
        escape(&style.y_label)
    );

    for s in series {
        let first = s.points[0];
        if s.points.iter().all(|p| *p == first) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#,
                px(first.0),
                py(first.1),
                s.color
            );
            continue;
        }
        let mut pts = String::with_capacity(16 * s.points.len());
        for (i, &(x, y)) in s.points.iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", px(x), py(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{pts}"/>"#,
            s.color
        );
    }

    let labelled: Vec<&Series> = series.iter().filter(|s| !s.label.is_empty()).collect();
    for (i, s) in labelled.iter().enumerate() {
        let y = top + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line class="legend" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>"#,
            right - 150.0,
            y - 4.0,
            right - 130.0,
            y - 4.0,
            s.color
        );
        let _ = writeln!(
            out,
            r#"<text class="legend" x="{}" y="{y}" {font}>{}</text>"#,
            right - 124.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn export_svg(series: &[Series], style: &PlotStyle, path: &Path) -> Result<()> {
    fs::write(path, render_svg(series, style)?)?;
    Ok(())
}
