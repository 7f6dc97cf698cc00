use std::collections::BTreeMap;
use std::fmt::Write as _;

use quadmap::chaos::Witness;
use quadmap::{tol, AmbientVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// 17 significant digits: enough to round-trip any f64.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub unit_norm: f64,
    pub fresh: f64,
    pub degeneracy: f64,
    pub orthogonality: f64,
    pub round_trip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit_norm: tol::UNIT_NORM,
            fresh: tol::FRESH,
            degeneracy: tol::DEGENERACY,
            orthogonality: tol::ORTHOGONALITY,
            round_trip: tol::ROUND_TRIP,
        }
    }
}

/// What produced a report: every setting needed to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub dim: usize,
    pub pole: Vec<f64>,
    pub mode: String,
    pub seed: u64,
    pub horizon: Option<usize>,
    pub tolerances: Tolerances,
    pub params: BTreeMap<String, Value>,
}

/// One checked statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub verdicts: Vec<VerdictRow>,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Plain-text table of verdicts.
pub fn table(rows: &[VerdictRow]) -> String {
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let pad = width - r.name.chars().count();
        let _ = write!(out, "{status}  {}{}", r.name, " ".repeat(pad));
        match (r.value, r.threshold) {
            (Some(v), Some(t)) => {
                let _ = write!(out, "  {v:.3e} (limit {t:.0e})");
            }
            (Some(v), None) => {
                let _ = write!(out, "  {v}");
            }
            _ => {}
        }
        if !r.note.is_empty() {
            let _ = write!(out, "  {}", r.note);
        }
        out.push('\n');
    }
    out
}

/// `step,x0,...,xn,norm_drift,slice_residual[,extra...]`.
pub fn orbit_csv(
    points: &[AmbientVector],
    norm_drift: &[f64],
    slice_residual: &[f64],
    extra: Option<(&str, Vec<String>)>,
) -> String {
    let len = points.first().map_or(0, |p| p.len());
    let mut out = String::from("step");
    for i in 0..len {
        let _ = write!(out, ",x{i}");
    }
    out.push_str(",norm_drift,slice_residual");
    if let Some((name, _)) = &extra {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for (step, p) in points.iter().enumerate() {
        let _ = write!(out, "{step}");
        for c in p.coords() {
            let _ = write!(out, ",{}", float(*c));
        }
        let _ = write!(out, ",{},{}", float(norm_drift[step]), float(slice_residual[step]));
        if let Some((_, values)) = &extra {
            let _ = write!(out, ",{}", values[step]);
        }
        out.push('\n');
    }
    out
}

const SIZE: f64 = 480.0;

/// Minimal SVG canvas mapping `[-extent, extent]²` onto the picture, y up.
pub struct Svg {
    body: String,
    extent: f64,
}

impl Svg {
    pub fn new(extent: f64) -> Self {
        Self { body: String::new(), extent }
    }

    fn map(&self, [x, y]: [f64; 2]) -> (f64, f64) {
        let s = SIZE / (2.0 * self.extent);
        (SIZE / 2.0 + s * x, SIZE / 2.0 - s * y)
    }

    pub fn circle(&mut self, center: [f64; 2], radius: f64, style: &str) {
        let (cx, cy) = self.map(center);
        let r = radius * SIZE / (2.0 * self.extent);
        let _ = writeln!(self.body, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" {style}/>"#);
    }

    pub fn polyline(&mut self, points: &[[f64; 2]], style: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(self.body, r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" "));
    }

    pub fn dots(&mut self, points: &[[f64; 2]], style: &str) {
        for &p in points {
            self.circle(p, self.extent / 150.0, style);
        }
    }

    pub fn label(&mut self, at: [f64; 2], text: &str) {
        let (x, y) = self.map(at);
        let _ = writeln!(self.body, r#"<text x="{x:.3}" y="{y:.3}" font-size="12" font-family="sans-serif">{text}</text>"#);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}
