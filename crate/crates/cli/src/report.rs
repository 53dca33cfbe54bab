//! Structured run reports and their canonical JSON serialization.
//!
//! Reports are written with sorted keys and fixed 17-significant-digit
//! float formatting so identical runs produce byte-identical files and
//! regressions show up as plain diffs.

use serde::Serialize;
use serde_json::Value;
use std::path::Path;

/// One asserted inequality: `measured <= bound + slack_allowance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub bound: f64,
    pub measured: f64,
    /// `bound + allowance - measured`; negative means the check failed.
    pub slack: f64,
    pub pass: bool,
}

impl Check {
    pub fn upper(name: &str, measured: f64, bound: f64, allowance: f64) -> Self {
        let slack = bound + allowance - measured;
        Self {
            name: name.to_string(),
            bound,
            measured,
            slack,
            pass: slack >= 0.0,
        }
    }

    /// `measured` must exceed `bound` strictly.
    pub fn lower(name: &str, measured: f64, bound: f64) -> Self {
        let slack = measured - bound;
        Self {
            name: name.to_string(),
            bound,
            measured,
            slack,
            pass: slack > 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub status: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, config: Value, checks: Vec<Check>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            config,
            checks,
            data,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let value = serde_json::to_value(self).expect("report serializes");
        std::fs::write(dir.join("report.json"), canonical_json(&value))
    }
}

/// Canonical rendering: keys sorted (serde_json maps are ordered),
/// floats as `{:.16e}`, no insignificant whitespace, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format!("{:.16e}", n.as_f64().unwrap()));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push(':');
                write_value(out, item);
            }
            out.push('}');
        }
    }
}

/// `k,sigma` CSV for a singular value list.
pub fn spectrum_csv(singular_values: &[f64]) -> String {
    let mut out = String::from("k,sigma\n");
    for (k, s) in singular_values.iter().enumerate() {
        out.push_str(&format!("{k},{:.16e}\n", s));
    }
    out
}
