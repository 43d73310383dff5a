use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// Envelope shared by every command. `verified` is `None` for plain
/// computations that check no claim.
#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub claim: &'static str,
    pub verified: Option<bool>,
    pub result: Value,
}

impl Report {
    pub fn new(
        command: &'static str,
        claim: &'static str,
        verified: Option<bool>,
        result: impl Serialize,
    ) -> Self {
        Report {
            schema: SCHEMA,
            command,
            claim,
            verified,
            result: serde_json::to_value(result).expect("reports serialize to JSON"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize to JSON")
    }

    pub fn to_text(&self) -> String {
        let status = match self.verified {
            Some(true) => "verified",
            Some(false) => "NOT verified",
            None => "computed",
        };
        let mut out = format!("{} ({}): {status}\n", self.command, self.claim);
        render(&mut out, &self.result, 1);
        out
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || x.is_array() {
                    let _ = writeln!(out, "{pad}{k}:");
                    render(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() || x.is_array() {
                    let _ = writeln!(out, "{pad}-");
                    render(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}- {}", scalar(x));
                }
            }
        }
        x => {
            let _ = writeln!(out, "{pad}{}", scalar(x));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "n/a".into(),
        x => x.to_string(),
    }
}
