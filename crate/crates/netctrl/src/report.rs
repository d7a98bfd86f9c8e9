//! Deterministic JSON reports: sorted keys (serde_json's default map is a
//! BTreeMap) and floats rounded to 12 significant digits so identical inputs
//! produce byte-identical output. Timing is only included when the
//! NETCTRL_TIMING environment variable is set, since it would break
//! byte-stability.

use serde_json::{json, Value};

/// Round to 12 significant digits. Zero, infinities and NaN pass through.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if !n.is_i64() && !n.is_u64() {
                    if let Some(r) = serde_json::Number::from_f64(sig12(f)) {
                        *v = Value::Number(r);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Wrap a command's body into the final report and render it. `elapsed` is
/// dropped unless NETCTRL_TIMING is set.
pub fn render(command: &str, mut body: Value, elapsed: std::time::Duration) -> String {
    round_floats(&mut body);
    let mut report = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if std::env::var_os("NETCTRL_TIMING").is_some() {
        report["elapsed_ms"] = json!(elapsed.as_millis() as u64);
    }
    if let (Value::Object(out), Value::Object(src)) = (&mut report, body) {
        for (k, v) in src {
            out.insert(k, v);
        }
    }
    serde_json::to_string_pretty(&report).expect("report serializes")
}
