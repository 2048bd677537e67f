//! Report assembly. Every command builds one JSON value; `--format table`
//! renders that same value as text.

use cell_lab_core::laurent::Laurent;
use serde_json::Value;

/// `{"-1": 3, "2": 1}`-shaped objects are Laurent polynomials.
fn as_laurent(v: &Value) -> Option<Laurent> {
    let obj = v.as_object()?;
    if obj.is_empty() || !obj.keys().all(|k| k.parse::<i32>().is_ok()) {
        return None;
    }
    serde::Deserialize::deserialize(v).ok()
}

/// Fits in one table cell.
fn is_simple(v: &Value) -> bool {
    match v {
        Value::Object(_) => as_laurent(v).is_some(),
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        _ => true,
    }
}

fn cell(v: &Value) -> String {
    if let Some(p) = as_laurent(v) {
        return p.to_string();
    }
    match v {
        Value::String(s) if s.is_empty() => "e".into(),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn table(rows: &[Value], out: &mut String, indent: &str) {
    let mut cols: Vec<&str> = Vec::new();
    for r in rows {
        for k in r.as_object().into_iter().flat_map(|o| o.keys()) {
            if !cols.contains(&k.as_str()) {
                cols.push(k);
            }
        }
    }
    let body: Vec<Vec<String>> =
        rows.iter().map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect()).collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| body.iter().map(|r| r[i].chars().count()).max().unwrap_or(0).max(c.len()))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(cols.iter().map(|c| c.to_string()).collect()));
    for r in body {
        out.push_str(&line(r));
    }
}

fn render_into(key: &str, v: &Value, out: &mut String, indent: &str) {
    match v {
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
            out.push_str(&format!("{indent}{key}:\n"));
            let nested = format!("{indent}  ");
            if items.iter().all(|i| i.as_object().unwrap().values().all(is_simple)) {
                table(items, out, &nested);
            } else {
                for (i, item) in items.iter().enumerate() {
                    render_into(&format!("[{i}]"), item, out, &nested);
                }
            }
        }
        Value::Object(obj) if as_laurent(v).is_none() => {
            out.push_str(&format!("{indent}{key}:\n"));
            let nested = format!("{indent}  ");
            for (k, x) in obj {
                render_into(k, x, out, &nested);
            }
        }
        _ => out.push_str(&format!("{indent}{key}: {}\n", cell(v))),
    }
}

pub fn render_table(report: &Value) -> String {
    let mut out = String::new();
    match report.as_object() {
        Some(obj) => {
            for (k, v) in obj {
                render_into(k, v, &mut out, "");
            }
        }
        None => out.push_str(&cell(report)),
    }
    out
}
