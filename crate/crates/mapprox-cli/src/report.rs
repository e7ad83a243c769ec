//! Report assembly and emission. Reports are JSON with a stable
//! `report_version`; floats use serde_json's shortest round-trip encoding,
//! so values read back bit-exactly.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use mapprox_core::seq::{CauchyCheck, MAVerdict};
use mapprox_core::sim::CcltReport;
use mapprox_core::slope::SlopeVerdict;

pub const REPORT_VERSION: u32 = 1;

pub fn wrap(command: &str, config: Value, payload: Value) -> Value {
    json!({
        "report_version": REPORT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": payload,
    })
}

pub fn emit(value: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match out {
        Some(path) => std::fs::write(path, text + "\n"),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            writeln!(lock, "{text}")
        }
    }
}

/// One structured error object on stderr; stdout stays clean.
pub fn emit_error(code: &str, message: &str) {
    let value = json!({ "error": { "code": code, "message": message } });
    eprintln!("{}", serde_json::to_string(&value).expect("errors serialize"));
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn slope_json(v: &SlopeVerdict) -> Value {
    json!({
        "grid": v.grid,
        "values": v.values,
        "slope": finite_or_null(v.slope),
        "threshold": v.threshold,
        "margin": v.margin,
        "verdict": v.verdict.as_str(),
    })
}

pub fn cauchy_json(c: &CauchyCheck) -> Value {
    json!({
        "window": [c.window.0, c.window.1],
        "oscillation": c.oscillation,
        "oscillation_lower": c.oscillation_lower,
        "tol": c.tol,
        "cauchy": c.verdict.as_str(),
    })
}

pub fn ma_verdict_json(v: &MAVerdict) -> Value {
    json!({
        "exists": v.exists.as_str(),
        "kappa_sq": v.kappa_sq,
        "kappa_analytic": v.kappa_analytic,
        "norm_condition": slope_json(&v.norm_condition),
        "bbar_cauchy": cauchy_json(&v.bbar_cauchy),
        "trace": v.trace.iter().map(|(n, x)| json!([n, x])).collect::<Vec<_>>(),
    })
}

pub fn cclt_json(r: &CcltReport) -> Value {
    json!({
        "n": r.n,
        "paths": r.paths,
        "kappa_sq_hat": r.kappa_sq_hat,
        "distance": r.distance,
        "distance_kind": r.distance_kind.as_str(),
        "per_state": r.per_state.as_ref().map(|v| {
            v.iter()
                .map(|p| json!({ "state": p.state, "count": p.count, "distance": p.distance }))
                .collect::<Vec<_>>()
        }),
        "unconditional_surrogate": r.unconditional_surrogate,
        "degenerate_kappa": r.degenerate_kappa,
    })
}

pub fn claim(name: &str, pass: bool, detail: String) -> Value {
    json!({ "claim": name, "pass": pass, "detail": detail })
}
