use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("plain data")),
        Format::Table => print!("{}", table(v)),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Objects become aligned `key  value` lines; arrays of objects one row each.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                out.push_str(&format!("{k:width$}  {}\n", cell(x)));
            }
        }
        Value::Array(rows) => {
            for r in rows {
                match r {
                    Value::Object(map) => {
                        let fields: Vec<String> = map.iter().map(|(k, x)| format!("{k}={}", cell(x))).collect();
                        out.push_str(&fields.join("  "));
                    }
                    other => out.push_str(&cell(other)),
                }
                out.push('\n');
            }
        }
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
    out
}
