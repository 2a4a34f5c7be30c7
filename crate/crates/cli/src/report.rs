//! Report assembly. Reports are plain JSON values so the payload is
//! canonical: object keys serialize in sorted order, which makes repeated
//! runs byte-comparable once the timings block is set aside.

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "beable-report/1";

pub struct Timings {
    pub parse_ms: f64,
    pub run_ms: f64,
}

pub fn build(
    command: &str,
    scenario_echo: Value,
    seed: u64,
    results: Value,
    residuals: Map<String, Value>,
    timings: &Timings,
) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "scenario_echo": scenario_echo,
        "seed": seed,
        "results": results,
        "residuals": residuals,
        "timings": {
            "parse_ms": timings.parse_ms,
            "run_ms": timings.run_ms,
        },
    })
}

/// Residual maps hold plain numbers; this keeps insertion terse.
pub fn push_residual(map: &mut Map<String, Value>, name: &str, value: f64) {
    map.insert(name.to_string(), json!(value));
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).unwrap_or_default(),
    }
}

/// Human-readable view: headline, then flat result fields, then residuals.
/// Matrices and other nested payloads are summarised, not dumped.
pub fn human(report: &Value, headline: &str) -> String {
    let mut out = String::new();
    out.push_str(headline);
    out.push('\n');

    if let Some(results) = report.get("results").and_then(Value::as_object) {
        for (key, value) in results {
            match value {
                Value::Array(a) if a.len() > 8 => {
                    out.push_str(&format!("  {key}: [{} entries]\n", a.len()));
                }
                Value::Object(_) => {
                    out.push_str(&format!("  {key}: {}\n", summarize(value)));
                }
                other => out.push_str(&format!("  {key}: {}\n", render_value(other))),
            }
        }
    }

    if let Some(residuals) = report.get("residuals").and_then(Value::as_object) {
        if !residuals.is_empty() {
            out.push_str("residuals:\n");
            for (key, value) in residuals {
                out.push_str(&format!("  {key}: {}\n", render_value(value)));
            }
        }
    }

    if let Some(t) = report
        .get("timings")
        .and_then(|t| t.get("run_ms"))
        .and_then(Value::as_f64)
    {
        out.push_str(&format!("run time: {t:.1} ms\n"));
    }
    out
}

fn summarize(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let keys: Vec<&str> = m.keys().map(String::as_str).collect();
            format!("{{{}}}", keys.join(", "))
        }
        other => render_value(other),
    }
}
