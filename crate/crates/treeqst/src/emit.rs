//! CSV and JSON serialization of result tables.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::sweep::Table;

/// 17 significant digits, enough to read every `f64` back exactly.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn to_csv(table: &Table) -> Result<String> {
    if table.is_empty() {
        return Err(CliError::EmptyTable);
    }
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Array of row objects keyed by column name; non-finite values become `null`.
pub fn to_json(table: &Table) -> Result<String> {
    if table.is_empty() {
        return Err(CliError::EmptyTable);
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, &x)| {
                    (
                        k.clone(),
                        Number::from_f64(x).map_or(Value::Null, Value::Number),
                    )
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("plain JSON values");
    s.push('\n');
    Ok(s)
}

pub fn render(table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

/// Write to `path`, or to stdout when `path` is `None`. Nothing is written
/// for an empty table.
pub fn emit(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(table, format)?;
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
