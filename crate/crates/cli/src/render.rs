use serde_json::Value;

use crate::Format;

/// Pretty JSON, or one `path: value` line per leaf.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text(report, "", &mut out);
            out
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn text(v: &Value, path: &str, out: &mut String) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                text(child, &join(k), out);
            }
        }
        Value::Array(items) if !items.iter().all(is_scalar) => {
            for (i, child) in items.iter().enumerate() {
                text(child, &join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}
