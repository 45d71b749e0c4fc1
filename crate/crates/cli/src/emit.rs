//! Rendering documents as CSV or JSON and writing them out.

use std::fmt::Write as _;
use std::path::Path;

use ionbound::bounds::sig6;
use serde_json::Value;

use crate::config::Format;

pub enum Document {
    /// A single structured result.
    Json(Value),
    /// Row data with a native CSV rendering and a JSON mirror.
    Table { csv: String, json: Value },
}

impl Document {
    pub fn default_format(&self) -> Format {
        match self {
            Document::Json(_) => Format::Json,
            Document::Table { .. } => Format::Csv,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Document::Table { csv, .. }, Format::Csv) => csv.clone(),
            (Document::Table { json, .. } | Document::Json(json), Format::Json) => {
                let mut s = serde_json::to_string_pretty(json).expect("serializable");
                s.push('\n');
                s
            }
            (Document::Json(v), Format::Csv) => flatten_csv(v),
        }
    }
}

/// `key,value` rows; nested keys are dotted, numbers use six significant
/// digits. Arrays longer than a handful of entries (profiles, point lists)
/// are left to the JSON form.
pub fn flatten_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

const MAX_INLINE: usize = 8;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.to_string(),
            (None, Some(f)) => sig6(f),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.replace(',', ";")),
        _ => None,
    }
}

fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                walk(&key(k), x, rows);
            }
        }
        Value::Array(items) if items.len() <= MAX_INLINE => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            if let Some(parts) = parts {
                rows.push((prefix.to_string(), parts.join(" ")));
            }
        }
        Value::Array(_) => {}
        other => rows.push((prefix.to_string(), scalar(other).unwrap_or_default())),
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| format!("cli-report: cannot create {}: {e}", dir.display()))?;
    }
    std::fs::write(path, text).map_err(|e| format!("cli-report: cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_documents() {
        let v = json!({"b": 1.23456789, "a": {"x": 2, "y": [0.5, 0.25]}, "long": [1, 2, 3, 4, 5, 6, 7, 8, 9], "s": "p,q"});
        assert_eq!(flatten_csv(&v), "key,value\na.x,2\na.y,0.5 0.25\nb,1.23457\ns,p;q\n");
    }

    #[test]
    fn tables_default_to_csv() {
        let d = Document::Table { csv: "h\n".into(), json: json!([]) };
        assert_eq!(d.default_format(), Format::Csv);
        assert_eq!(d.render(Format::Json), "[]\n");
        assert_eq!(Document::Json(json!({})).default_format(), Format::Json);
    }
}
