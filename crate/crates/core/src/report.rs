//! JSON and text reports. Every slope is shown both as a homology pair and
//! as its tau coordinate.

use serde_json::{json, Value};

use crate::ctf::{CtfVerdict, DegenerateReport};
use crate::graph::{Diagnostic, PlumbingGraph};
use crate::homology::HomologySummary;
use crate::seifert::{DetectionResult, JnCertificate};
use crate::slope::{fmt_rational, Slope, SlopeArc};

pub const SCHEMA: u32 = 1;

pub fn slope_json(s: &Slope) -> Value {
    json!({ "pq": s.to_string(), "tau": s.tau_string() })
}

pub fn arc_json(a: &SlopeArc) -> Value {
    match a {
        SlopeArc::Empty => json!({ "kind": "empty" }),
        SlopeArc::Full => json!({ "kind": "full" }),
        SlopeArc::Point(s) => json!({ "kind": "point", "slope": slope_json(s) }),
        SlopeArc::Arc(s, e) => json!({ "kind": "arc", "start": slope_json(s), "end": slope_json(e) }),
    }
}

fn cert_json(c: &Option<JnCertificate>) -> Value {
    c.as_ref()
        .map_or(Value::Null, |c| serde_json::to_value(c).expect("serializable"))
}

pub fn detection_json(torus: &str, d: &DetectionResult, degenerate: Option<&DegenerateReport>) -> Value {
    let exceptions: Vec<Value> = d
        .exceptions
        .iter()
        .map(|e| json!({ "slope": slope_json(&e.slope), "status": e.status, "reason": e.reason }))
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "detect",
        "torus": torus,
        "detected": arc_json(&d.detected),
        "exceptions": exceptions,
        "normalized_core": d.core.as_ref().map(|(a, b)| json!([a.to_string(), b.to_string()])),
        "low_refinement": cert_json(&d.low),
        "high_refinement": cert_json(&d.high),
        "nmax": d.nmax.to_string(),
        "degenerate": degenerate.map(|r| serde_json::to_value(r).expect("serializable")),
    })
}

pub fn detection_text(torus: &str, d: &DetectionResult, degenerate: Option<&DegenerateReport>) -> String {
    let mut out = format!("D({}) = {}\n", torus, arc_text(&d.detected));
    if d.exceptions.is_empty() {
        out.push_str("every detected slope is strongly detected\n");
    }
    for e in &d.exceptions {
        out.push_str(&format!(
            "  {} ({}): {}, {}\n",
            e.slope,
            e.slope.tau_string(),
            e.status,
            e.reason
        ));
    }
    if let Some((a, b)) = &d.core {
        out.push_str(&format!("core interval [{}, {}] (normalized frame)\n", a, b));
    }
    for c in d.low.iter().chain(&d.high) {
        out.push_str(&format!(
            "{:?} refinement to {} (normalized frame) with N = {}, A = {}\n",
            c.side,
            fmt_rational(&c.endpoint),
            c.n,
            c.a
        ));
    }
    if let Some(r) = degenerate {
        out.push_str(&format!("degenerate: {} ({})\n", r.is_point, r.explanation));
    }
    out
}

pub fn arc_text(a: &SlopeArc) -> String {
    let both = |s: &Slope| format!("{} [tau {}]", s, s.tau_string());
    match a {
        SlopeArc::Empty => "empty".to_string(),
        SlopeArc::Full => "all slopes".to_string(),
        SlopeArc::Point(s) => format!("{{{}}}", both(s)),
        SlopeArc::Arc(s, e) => format!("arc from {} to {}", both(s), both(e)),
    }
}

pub fn validate_json(diags: &[Diagnostic], homology: Option<&HomologySummary>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "validate",
        "valid": diags.iter().all(|d| d.severity != crate::graph::Severity::Error),
        "diagnostics": diags,
        "homology": homology,
    })
}

pub fn longitude_json(torus: &str, lambda: &Slope, order: &num_bigint::BigInt) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "longitude",
        "torus": torus,
        "longitude": slope_json(lambda),
        "order": order.to_string(),
    })
}

pub fn ctf_json(g: &PlumbingGraph, v: &CtfVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        w.iter()
            .map(|(s, slope)| (g.side_name(*s), json!(slope.to_string())))
            .collect::<serde_json::Map<String, Value>>()
    });
    let tags: serde_json::Map<String, Value> = v
        .piece_tags
        .iter()
        .map(|(i, t)| (g.pieces[*i].id.clone(), json!(t)))
        .collect();
    let e = &g.edges[v.split_edge];
    json!({
        "schema": SCHEMA,
        "command": "ctf",
        "admits": v.admits,
        "witness": witness,
        "piece_tags": tags,
        "lspace_note": v.lspace_note,
        "split_edge": v.split_edge,
        "from_side": { "torus": g.side_name(e.from), "detected": arc_json(&v.from_side.detected) },
        "to_side": { "torus": g.side_name(e.to), "detected": arc_json(&v.to_side.detected) },
    })
}

pub fn ctf_text(g: &PlumbingGraph, v: &CtfVerdict) -> String {
    let e = &g.edges[v.split_edge];
    let mut out = format!(
        "split along edge {}: D({}) = {}, D({}) = {}\n",
        v.split_edge,
        g.side_name(e.from),
        arc_text(&v.from_side.detected),
        g.side_name(e.to),
        arc_text(&v.to_side.detected)
    );
    out.push_str(&format!("admits CTF: {}\n", v.admits));
    if let Some(w) = &v.witness {
        for (s, slope) in w {
            out.push_str(&format!(
                "  {} -> {} [tau {}]\n",
                g.side_name(*s),
                slope,
                slope.tau_string()
            ));
        }
        for (i, t) in &v.piece_tags {
            out.push_str(&format!("  piece {}: {}\n", g.pieces[*i].id, t));
        }
    }
    out.push_str(&v.lspace_note);
    out.push('\n');
    out
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}
