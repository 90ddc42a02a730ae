//! Report envelope and deterministic JSON rendering. Every float is printed
//! with 17 significant digits; object keys come out sorted, so identical runs
//! produce identical bytes.

use serde_json::Value;

pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a JSON value with two-space indentation and full-precision floats.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64-backed number");
                if x.is_finite() {
                    out.push_str(&fmt_g17(x));
                } else {
                    out.push_str("null");
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                indent(depth + 1, out);
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                indent(depth + 1, out);
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push('}');
        }
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Assembles the run report: tool version, config hash, seed, and one entry
/// per executed analysis. Wall times are attached only when requested so that
/// the default output is byte-identical across reruns.
pub struct ReportBuilder {
    version: String,
    config_hash: String,
    seed: u64,
    timings: bool,
    analyses: Vec<Value>,
}

impl ReportBuilder {
    pub fn new(config_hash: &str, seed: u64, timings: bool) -> Self {
        ReportBuilder {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash.to_string(),
            seed,
            timings,
            analyses: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: &str, params: Value, result: Value, wall_seconds: f64) {
        let mut entry = serde_json::Map::new();
        entry.insert("kind".into(), Value::String(kind.into()));
        entry.insert("params".into(), params);
        entry.insert("result".into(), result);
        if self.timings {
            entry.insert(
                "wall_time_s".into(),
                serde_json::Number::from_f64(wall_seconds)
                    .map(Value::Number)
                    .unwrap_or(Value::Null),
            );
        }
        self.analyses.push(Value::Object(entry));
    }

    pub fn finish(self) -> Value {
        serde_json::json!({
            "tool": "chronolab",
            "version": self.version,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "analyses": self.analyses,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_with_full_precision() {
        let v = serde_json::json!({"x": 2401.0 / 7200.0, "n": 3, "s": "a\"b"});
        let text = render_json(&v);
        assert!(text.contains("3.3347222222222223e-1"), "{text}");
        assert!(text.contains("\"n\": 3"));
        assert!(text.contains("\"s\": \"a\\\"b\""));
    }

    #[test]
    fn keys_are_sorted_and_stable() {
        let v = serde_json::json!({"zeta": 1, "alpha": 2});
        let a = render_json(&v);
        let b = render_json(&v);
        assert_eq!(a, b);
        assert!(a.find("alpha").unwrap() < a.find("zeta").unwrap());
    }
}
