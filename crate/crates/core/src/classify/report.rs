//! JSON and text renderings of an [`AlgebraReport`].

use serde_json::{json, Value};

use super::AlgebraReport;
use crate::io::{float_json, rational_json};
use crate::scalar::{format_rational, Num};
use crate::solver::{IdempotentRecord, SolveMethod};

/// Idempotents listed in a rendering; continua are sampled by the solver and truncated here.
pub const RENDER_LIMIT: usize = 16;

pub const CONVENTION: &str = "type I: all three charges positive; type II: exactly one positive; type III: exactly two positive";

/// Exact values as integers or `"p/q"`, real floats as numbers, complex values as `{re, im}`.
pub fn num_json(n: &Num) -> Value {
    match &n.exact {
        Some(q) => rational_json(q),
        None if n.approx.im == 0.0 => float_json(n.approx.re + 0.0),
        None => json!({ "re": float_json(n.approx.re + 0.0), "im": float_json(n.approx.im + 0.0) }),
    }
}

/// `p/q (~decimal)` for exact values, the decimal (or complex pair) otherwise.
pub fn num_text(n: &Num) -> String {
    match &n.exact {
        Some(q) if q.is_integer() => format_rational(q),
        Some(q) => format!("{} (~{})", format_rational(q), short(n.approx.re)),
        None if n.approx.im == 0.0 => short(n.approx.re),
        None => format!("{}{}{}i", short(n.approx.re), if n.approx.im < 0.0 { "-" } else { "+" }, short(n.approx.im.abs())),
    }
}

fn short(x: f64) -> String {
    let s = format!("{:.10}", x + 0.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn coords(r: &IdempotentRecord) -> Vec<Num> {
    match &r.exact {
        Some(c) => c.iter().cloned().map(Num::exact).collect(),
        None => r.point.iter().copied().map(Num::approx).collect(),
    }
}

fn spectrum_nums(r: &IdempotentRecord) -> Vec<Num> {
    match &r.spectrum.exact {
        Some(e) => e.iter().cloned().map(Num::exact).collect(),
        None => r.spectrum.eigenvalues.iter().copied().map(Num::approx).collect(),
    }
}

fn list(ns: &[Num]) -> Value {
    Value::Array(ns.iter().map(num_json).collect())
}

pub fn report_json(report: &AlgebraReport) -> Value {
    let idempotents: Vec<Value> = report
        .idempotents
        .iter()
        .take(RENDER_LIMIT)
        .enumerate()
        .map(|(i, r)| {
            json!({
                "id": i,
                "coordinates": list(&coords(r)),
                "real": r.is_real,
                "spectrum": list(&spectrum_nums(r)),
                "chi_half": num_json(&r.chi_half),
                "charge": r.charge.as_ref().map(num_json),
                "index": r.index,
            })
        })
        .collect();
    let nilpotents: Vec<Value> = report
        .nilpotents
        .iter()
        .map(|d| {
            let nums: Vec<Num> = match &d.exact {
                Some(e) => e.iter().cloned().map(Num::exact).collect(),
                None => d.direction.iter().copied().map(Num::approx).collect(),
            };
            json!({ "direction": list(&nums), "real": d.is_real })
        })
        .collect();
    let line = report.witness_line.as_ref().map(|l| {
        json!({
            "base": l.base.iter().map(rational_json).collect::<Vec<_>>(),
            "direction": l.direction.iter().map(rational_json).collect::<Vec<_>>(),
        })
    });
    let residuals = report.residuals.as_ref().map(|r| {
        json!({
            "spectral": num_json(&r.spectral),
            "charge_sum": num_json(&r.charge_sum),
            "barycentric": list(&r.barycentric),
        })
    });
    json!({
        "label": report.label,
        "dim": report.dim,
        "scalar_mode": report.mode.to_string(),
        "method": match report.method { SolveMethod::Exact => "exact", SolveMethod::Numeric => "numeric" },
        "idempotents": idempotents,
        "idempotents_omitted": report.idempotents.len().saturating_sub(RENDER_LIMIT),
        "nilpotents": nilpotents,
        "continuum": report.continuum,
        "witness_line": line,
        "multiplicity_at_infinity": report.multiplicity_at_infinity,
        "verdict": report.verdict,
        "real_generic": report.real_generic,
        "sigma": list(&report.sigma),
        "type": report.config_type,
        "type_geometric": report.config_type_geometric,
        "type_convention": CONVENTION,
        "type_note": report.type_note,
        "charges": report.charges.as_deref().map(list),
        "indices": report.indices,
        "index_at_infinity": report.index_at_infinity,
        "index_sum": report.index_sum,
        "residuals": residuals,
        "notes": report.notes,
    })
}

pub fn report_text(report: &AlgebraReport) -> String {
    let mut out = Vec::new();
    let label = report.label.as_deref().unwrap_or("(unnamed)");
    out.push(format!("algebra {label}: dim {}, {} scalars, {} solve", report.dim, report.mode, match report.method {
        SolveMethod::Exact => "exact",
        SolveMethod::Numeric => "numeric",
    }));
    out.push(format!("verdict: {} ({})", report.verdict.status, report.verdict.evidence));
    if let Some(rg) = report.real_generic.real_generic {
        out.push(format!("real generic: {rg} ({})", report.real_generic.evidence));
    }
    out.push(format!("idempotents: {}", report.idempotents.len()));
    for (i, r) in report.idempotents.iter().take(RENDER_LIMIT).enumerate() {
        let c: Vec<String> = coords(r).iter().map(num_text).collect();
        let s: Vec<String> = spectrum_nums(r).iter().map(num_text).collect();
        let mut line = format!("  c{i} = ({})  spectrum {{{}}}  chi(1/2) = {}", c.join(", "), s.join(", "), num_text(&r.chi_half));
        if let Some(a) = &r.charge {
            line.push_str(&format!("  charge {}", num_text(a)));
        }
        if let Some(ix) = r.index {
            line.push_str(&format!("  index {ix:+}"));
        }
        out.push(line);
    }
    if report.idempotents.len() > RENDER_LIMIT {
        out.push(format!("  ... {} more not shown", report.idempotents.len() - RENDER_LIMIT));
    }
    if !report.nilpotents.is_empty() {
        out.push(format!("nilpotent directions: {}", report.nilpotents.len()));
        for d in &report.nilpotents {
            let v: Vec<String> = d.direction.iter().map(|z| num_text(&Num::approx(*z))).collect();
            out.push(format!("  ({})", v.join(", ")));
        }
    }
    if let Some(l) = &report.witness_line {
        let b: Vec<String> = l.base.iter().map(format_rational).collect();
        let d: Vec<String> = l.direction.iter().map(format_rational).collect();
        out.push(format!("line of idempotents: ({}) + t ({})", b.join(", "), d.join(", ")));
    }
    if let Some(m) = report.multiplicity_at_infinity {
        out.push(format!("solutions at infinity: {m}"));
    }
    let sigma: Vec<String> = report.sigma.iter().map(num_text).collect();
    out.push(format!("sigma(A) = {{{}}}", sigma.join(", ")));
    out.push(format!("type: {}", report.config_type));
    if let Some(g) = report.config_type_geometric {
        out.push(format!("type from geometry: {g}"));
    }
    if let Some(n) = &report.type_note {
        out.push(format!("no type: {n}"));
    }
    out.push(format!("convention: {CONVENTION}"));
    if let Some(ch) = &report.charges {
        let v: Vec<String> = ch.iter().map(num_text).collect();
        out.push(format!("charges (a0..a3): ({})", v.join(", ")));
    }
    if let (Some(inf), Some(sum)) = (report.index_at_infinity, report.index_sum) {
        out.push(format!("index at infinity: {inf}; sum over the four idempotents: {sum}"));
    }
    if let Some(r) = &report.residuals {
        let b: Vec<String> = r.barycentric.iter().map(num_text).collect();
        out.push(format!(
            "residuals: spectral {}, charge sum {}, barycentric ({})",
            num_text(&r.spectral),
            num_text(&r.charge_sum),
            b.join(", ")
        ));
    }
    for n in &report.notes {
        out.push(format!("note: {n}"));
    }
    out.join("\n") + "\n"
}
