//! Deterministic file outputs: per-step CSV clouds, a diagnostics JSON
//! report, and a minimal self-contained SVG scatter for planar states.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// One sampled state with the binary-leaf index it came from.
#[derive(Clone, Debug)]
pub struct LabelledPoint {
    pub x: Vec<f64>,
    pub leaf: usize,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Renders an f64 so that equal values always print identically.
fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{:.1}", v)
    } else {
        format!("{}", v)
    }
}

/// Writes `step_<k>.csv` with header `step,x1,..,xn,leaf`. Output is a pure
/// function of the inputs, so identical runs produce identical bytes.
pub fn write_step_csv(
    dir: &Path,
    step: usize,
    dim: usize,
    points: &[LabelledPoint],
) -> Result<std::path::PathBuf, CliError> {
    let path = dir.join(format!("step_{}.csv", step));
    let mut out = String::new();
    out.push_str("step");
    for i in 1..=dim {
        out.push_str(&format!(",x{}", i));
    }
    out.push_str(",leaf\n");
    for p in points {
        out.push_str(&format!("{}", step));
        for v in &p.x {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push_str(&format!(",{}\n", p.leaf));
    }
    fs::write(&path, out).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Per-step run statistics mirrored into `diagnostics.json`.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub pieces: usize,
    pub dropped_empty: usize,
    pub max_generators: usize,
    pub max_factors: usize,
    pub max_constraints: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
    pub sampled_points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub model: String,
    pub steps: usize,
    pub seed: u64,
    pub grid_res: usize,
    pub samples: usize,
    pub leaf_cap_log2: u32,
    pub per_step: Vec<StepReport>,
}

pub fn write_diagnostics(dir: &Path, report: &RunReport) -> Result<std::path::PathBuf, CliError> {
    let path = dir.join("diagnostics.json");
    let body = serde_json::to_string_pretty(report).map_err(|e| CliError::Parse {
        message: format!("serializing diagnostics: {}", e),
    })?;
    let mut f = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    f.write_all(body.as_bytes()).map_err(|e| io_err(&path, e))?;
    f.write_all(b"\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Scatter plot of 2-D step clouds, one color per step, with optional guard
/// boundary lines `l . x = rho` drawn across the view box.
pub fn write_scatter_svg(
    dir: &Path,
    name: &str,
    steps: &[Vec<LabelledPoint>],
    guards: &[(Vec<f64>, f64)],
) -> Result<std::path::PathBuf, CliError> {
    let path = dir.join(name);
    let all: Vec<&LabelledPoint> = steps.iter().flatten().collect();
    let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    if !all.is_empty() {
        x0 = f64::INFINITY;
        x1 = f64::NEG_INFINITY;
        y0 = f64::INFINITY;
        y1 = f64::NEG_INFINITY;
        for p in &all {
            x0 = x0.min(p.x[0]);
            x1 = x1.max(p.x[0]);
            y0 = y0.min(p.x[1]);
            y1 = y1.max(p.x[1]);
        }
        let pad_x = 0.05 * (x1 - x0).max(1e-6);
        let pad_y = 0.05 * (y1 - y0).max(1e-6);
        x0 -= pad_x;
        x1 += pad_x;
        y0 -= pad_y;
        y1 += pad_y;
    }
    let (w, h) = (640.0, 640.0);
    let sx = |x: f64| (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| h - (y - y0) / (y1 - y0) * h;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    for (l, rho) in guards {
        // Intersect the line l.x = rho with the view box by sampling two
        // far-apart points along its direction.
        if l.len() != 2 || (l[0] == 0.0 && l[1] == 0.0) {
            continue;
        }
        let norm2 = l[0] * l[0] + l[1] * l[1];
        let base = [l[0] * rho / norm2, l[1] * rho / norm2];
        let dir = [-l[1], l[0]];
        let span = 10.0 * ((x1 - x0).abs() + (y1 - y0).abs());
        let a = [base[0] - span * dir[0], base[1] - span * dir[1]];
        let b = [base[0] + span * dir[0], base[1] + span * dir[1]];
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n",
            sx(a[0]), sy(a[1]), sx(b[0]), sy(b[1])
        ));
    }
    for (k, cloud) in steps.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for p in cloud {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.6\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
                sx(p.x[0]),
                sy(p.x[1]),
                color
            ));
        }
    }
    svg.push_str("</svg>\n");
    fs::write(&path, svg).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_deterministic_and_well_formed() {
        let dir = std::env::temp_dir().join("hpz-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let pts = vec![
            LabelledPoint { x: vec![0.5, -1.0], leaf: 0 },
            LabelledPoint { x: vec![0.25, 3.0], leaf: 2 },
        ];
        let p1 = write_step_csv(&dir, 3, 2, &pts).unwrap();
        let first = std::fs::read(&p1).unwrap();
        let p2 = write_step_csv(&dir, 3, 2, &pts).unwrap();
        let second = std::fs::read(&p2).unwrap();
        assert_eq!(first, second);
        let text = String::from_utf8(first).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("step,x1,x2,leaf"));
        assert_eq!(lines.next(), Some("3,0.5,-1.0,0"));
        assert_eq!(lines.next(), Some("3,0.25,3.0,2"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn svg_contains_points_and_guard() {
        let dir = std::env::temp_dir().join("hpz-svg-test");
        std::fs::create_dir_all(&dir).unwrap();
        let steps = vec![vec![LabelledPoint { x: vec![0.0, 0.0], leaf: 0 }]];
        let path =
            write_scatter_svg(&dir, "plot.svg", &steps, &[(vec![1.0, 0.0], 0.0)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("<circle"));
        assert!(text.contains("<line"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
