//! Phase portraits as SVG and CSV.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{integrate_signed, phase_analysis, FieldKind, OdeError, PhaseAnalysis, SingularPointClass, Trajectory, VectorField};
use crate::algebra::AnyAlgebra;
use crate::classify::analyze;
use crate::solver::SolverConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitOptions {
    pub kind: FieldKind,
    /// `[xmin, xmax, ymin, ymax]`.
    pub window: [f64; 4],
    /// Seeds per window side.
    pub density: usize,
    pub dt: f64,
    pub steps: usize,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions { kind: FieldKind::Riccati, window: [-2.0, 2.0, -2.0, 2.0], density: 12, dt: 1e-3, steps: 3000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedTrajectory {
    pub seed_id: usize,
    pub seed: Vec<f64>,
    pub forward: Trajectory,
    pub backward: Trajectory,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Portrait {
    pub options: PortraitOptions,
    pub trajectories: Vec<SeedTrajectory>,
    /// Singular points with `true` for antisaddles.
    pub markers: Vec<(Vec<f64>, bool)>,
    /// Directions of the idempotent rays.
    pub rays: Vec<Vec<f64>>,
}

/// Integrates a grid of seeds, plus seeds on each idempotent ray, both ways in time.
pub fn phase_portrait(
    field: &VectorField,
    opts: &PortraitOptions,
    markers: Vec<(Vec<f64>, bool)>,
    rays: Vec<Vec<f64>>,
) -> Result<Portrait, OdeError> {
    let [x0, x1, y0, y1] = opts.window;
    if field.dim() != 2 {
        return Err(OdeError::NotApplicable("portraits need a two-dimensional algebra".into()));
    }
    if !(x1 > x0 && y1 > y0) || opts.density == 0 || !(opts.dt > 0.0) || opts.steps == 0 {
        return Err(OdeError::Invalid("window must be nonempty and density, dt, steps positive".into()));
    }
    let n = opts.density;
    let mut seeds: Vec<Vec<f64>> = Vec::with_capacity(n * n + 4 * rays.len());
    for i in 0..n {
        for j in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            let v = (j as f64 + 0.5) / n as f64;
            seeds.push(vec![x0 + u * (x1 - x0), y0 + v * (y1 - y0)]);
        }
    }
    let reach = 0.5 * (x1 - x0).min(y1 - y0);
    for r in &rays {
        let len = (r[0] * r[0] + r[1] * r[1]).sqrt();
        for s in [0.3, -0.3, 0.8, -0.8] {
            seeds.push(vec![s * reach * r[0] / len, s * reach * r[1] / len]);
        }
    }
    let trajectories = seeds
        .into_par_iter()
        .enumerate()
        .map(|(seed_id, seed)| SeedTrajectory {
            seed_id,
            forward: integrate_signed(field, &seed, opts.dt, opts.steps),
            backward: integrate_signed(field, &seed, -opts.dt, opts.steps),
            seed,
        })
        .collect();
    Ok(Portrait { options: opts.clone(), trajectories, markers, rays })
}

/// SVG 1.1: trajectories as polylines, dashed idempotent rays, filled circles
/// for antisaddles and hollow circles for saddles.
pub fn render_svg(p: &Portrait) -> String {
    let [x0, x1, y0, y1] = p.options.window;
    let size = 600.0;
    let sx = |x: f64| (x - x0) / (x1 - x0) * size;
    let sy = |y: f64| (y1 - y) / (y1 - y0) * size;
    let inside = |q: &[f64]| {
        let (mx, my) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
        q[0] >= x0 - mx && q[0] <= x1 + mx && q[1] >= y0 - my && q[1] <= y1 + my
    };
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">");
    let _ = writeln!(s, "<defs><clipPath id=\"win\"><rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\"/></clipPath></defs>");
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\" stroke=\"black\"/>");
    s.push_str("<g clip-path=\"url(#win)\">\n");
    let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"0\" x2=\"{:.2}\" y2=\"{size}\" stroke=\"#ccc\"/>", sx(0.0), sx(0.0));
    let _ = writeln!(s, "<line x1=\"0\" y1=\"{:.2}\" x2=\"{size}\" y2=\"{:.2}\" stroke=\"#ccc\"/>", sy(0.0), sy(0.0));
    let far = 4.0 * (x1 - x0).abs().max((y1 - y0).abs());
    for r in &p.rays {
        let len = (r[0] * r[0] + r[1] * r[1]).sqrt();
        let (ex, ey) = (far * r[0] / len, far * r[1] / len);
        let _ = writeln!(
            s,
            "<line class=\"ray\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>",
            sx(-ex), sy(-ey), sx(ex), sy(ey)
        );
    }
    for t in &p.trajectories {
        for part in [&t.backward, &t.forward] {
            let stride = (part.points.len() / 200).max(1);
            let pts: Vec<String> = part
                .points
                .iter()
                .enumerate()
                .filter(|(k, q)| (k % stride == 0 || *k + 1 == part.points.len()) && inside(q))
                .map(|(_, q)| format!("{:.2},{:.2}", sx(q[0]), sy(q[1])))
                .collect();
            if pts.len() >= 2 {
                let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\"/>", pts.join(" "));
            }
        }
    }
    s.push_str("</g>\n");
    for (q, antisaddle) in &p.markers {
        let fill = if *antisaddle { "black" } else { "none" };
        let _ = writeln!(
            s,
            "<circle class=\"{}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"6\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"2\"/>",
            if *antisaddle { "antisaddle" } else { "saddle" },
            sx(q[0]),
            sy(q[1])
        );
    }
    s.push_str("</svg>\n");
    s
}

/// CSV with header `t,x1,x2,seed_id`; backward steps carry negative times.
pub fn render_csv(p: &Portrait) -> Result<String, OdeError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| OdeError::Io { path: "<csv>".into(), source: std::io::Error::other(e) };
    w.write_record(["t", "x1", "x2", "seed_id"]).map_err(io)?;
    for t in &p.trajectories {
        let back = t.backward.times.iter().zip(&t.backward.points).skip(1).rev().map(|(s, q)| (*s, q));
        let fwd = t.forward.times.iter().zip(&t.forward.points).map(|(s, q)| (*s, q));
        for (time, q) in back.chain(fwd) {
            w.write_record([format!("{time}"), format!("{}", q[0]), format!("{}", q[1]), t.seed_id.to_string()]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| OdeError::Io { path: "<csv>".into(), source: std::io::Error::other(e.to_string()) })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitSummary {
    pub kind: FieldKind,
    pub trajectories: usize,
    pub singular_points: Vec<SingularPointClass>,
    pub phase: Option<PhaseAnalysis>,
    pub rays: usize,
    pub files: Vec<String>,
}

/// Analyzes `alg`, integrates the portrait and writes the requested files.
pub fn emit_phase_portrait(
    alg: &AnyAlgebra,
    opts: &PortraitOptions,
    cfg: &SolverConfig,
    svg: Option<&Path>,
    csv: Option<&Path>,
) -> Result<PortraitSummary, OdeError> {
    let report = analyze(alg, cfg);
    let field = VectorField::new(opts.kind, alg);
    let points = report.real_points();
    let singular_points = if report.continuum { Vec::new() } else { super::classify_singular_points(&field.algebra, &points)? };
    let phase = phase_analysis(alg, &report).ok();
    let markers: Vec<(Vec<f64>, bool)> = match opts.kind {
        FieldKind::Riccati => singular_points.iter().map(|c| (c.point.clone(), c.antisaddle)).collect(),
        FieldKind::Squaring => Vec::new(),
    };
    let rays: Vec<Vec<f64>> = if report.continuum {
        Vec::new()
    } else {
        points.into_iter().filter(|p| p.iter().any(|x| *x != 0.0)).collect()
    };
    let portrait = phase_portrait(&field, opts, markers, rays)?;
    let mut files = Vec::new();
    let write = |path: &Path, body: String| {
        std::fs::write(path, body).map_err(|source| OdeError::Io { path: path.display().to_string(), source })
    };
    if let Some(path) = svg {
        write(path, render_svg(&portrait))?;
        files.push(path.display().to_string());
    }
    if let Some(path) = csv {
        write(path, render_csv(&portrait)?)?;
        files.push(path.display().to_string());
    }
    Ok(PortraitSummary {
        kind: opts.kind,
        trajectories: portrait.trajectories.len(),
        rays: 2 * portrait.rays.len(),
        singular_points,
        phase,
        files,
    })
}
