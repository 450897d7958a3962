//! Report rendering.
//!
//! Machine output is one JSON document `{"spec": 1, "command": …,
//! "result": …}` with every real written to 17 significant digits. Human
//! output is the same tree laid out as aligned tables.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use super::config::Format;

/// Version of the report layout.
pub const REPORT_SCHEMA_VERSION: u64 = 1;

pub fn render(command: &str, result: &impl Serialize, format: Format) -> String {
    let result = serde_json::to_value(result).expect("report types serialize");
    match format {
        Format::Machine => machine(command, result),
        Format::Human => human(command, &result),
    }
}

fn machine(command: &str, result: Value) -> String {
    let mut doc = Map::new();
    doc.insert("spec".into(), Value::from(REPORT_SCHEMA_VERSION));
    doc.insert("command".into(), Value::from(command));
    doc.insert("result".into(), with_full_precision(result));
    let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    out.push('\n');
    out
}

/// Rewrites every non-integer number as `d.dddddddddddddddde±x`.
fn with_full_precision(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => match n.as_f64() {
            Some(f) => {
                let text = format!("{f:.16e}");
                Value::Number(
                    serde_json::from_str::<Number>(&text).expect("formatted float is valid JSON"),
                )
            }
            None => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(with_full_precision).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, with_full_precision(v)))
                .collect(),
        ),
        other => other,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(scalar).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_table(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

/// Flattens nested objects into `a.b` rows; arrays of objects become
/// separate tables.
fn flatten(
    prefix: &str,
    v: &Value,
    rows: &mut Vec<(String, String)>,
    tables: &mut Vec<(String, Vec<Value>)>,
) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, rows, tables);
            }
        }
        Value::Array(items) if is_table(v) => tables.push((prefix.to_string(), items.clone())),
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn key_value_block(rows: &[(String, String)], out: &mut String) {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in rows {
        out.push_str(&format!("  {k:<width$}  {v}\n"));
    }
}

fn column_block(items: &[Value], out: &mut String) {
    let rows: Vec<Vec<(String, String)>> = items
        .iter()
        .map(|item| {
            let mut rows = Vec::new();
            let mut nested = Vec::new();
            flatten("", item, &mut rows, &mut nested);
            for (k, t) in nested {
                rows.push((k, format!("<{} rows>", t.len())));
            }
            rows
        })
        .collect();
    let mut columns: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cell = |row: &Vec<(String, String)>, col: &str| {
        row.iter()
            .find(|(k, _)| k == col)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| "-".into())
    };
    let widths: Vec<usize> = columns
        .iter()
        .map(|c| {
            rows.iter()
                .map(|r| cell(r, c).chars().count())
                .fold(c.chars().count(), usize::max)
        })
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(columns.clone()));
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    for row in &rows {
        out.push_str(&line(columns.iter().map(|c| cell(row, c)).collect()));
    }
}

fn human(command: &str, result: &Value) -> String {
    let mut out = format!("equilib {command}\n");
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    flatten("", result, &mut rows, &mut tables);
    key_value_block(&rows, &mut out);
    for (name, items) in tables {
        out.push_str(&format!(
            "\n{}\n",
            if name.is_empty() { "items" } else { &name }
        ));
        column_block(&items, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn machine_uses_seventeen_digits() {
        let out = render(
            "solve",
            &json!({"x0": 2.0, "iterations": 3, "r": 0.1}),
            Format::Machine,
        );
        assert!(out.contains("\"x0\": 2.0000000000000000e+0"), "{out}");
        assert!(out.contains("\"r\": 1.0000000000000001e-1"), "{out}");
        assert!(out.contains("\"iterations\": 3"), "{out}");
        assert!(out.contains("\"spec\": 1"), "{out}");
        let back: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(back["result"]["r"].as_f64(), Some(0.1));
    }

    #[test]
    fn human_aligns_rows_and_tables() {
        let v = json!({"t_eq": 2.0, "per_body": [{"label": "a", "heat": 1.0}, {"label": "bb", "heat": -1.0}]});
        let out = render("simulate", &v, Format::Human);
        assert!(out.contains("  t_eq  2.0\n"), "{out}");
        assert!(out.contains("per_body\n"), "{out}");
        assert!(out.contains("  label  heat\n"), "{out}");
        assert!(out.contains("  bb     -1.0\n"), "{out}");
    }
}
