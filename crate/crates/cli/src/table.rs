//! Column tables rendered as CSV or JSON and written atomically.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Non-finite and missing values render as an empty field / `null`.
    Float(Option<f64>),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(Some(v).filter(|v| v.is_finite()))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v.filter(|v| v.is_finite()))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(Some(v)) => format!("{v:.16e}"),
                    Cell::Float(None) => String::new(),
                    Cell::Bool(v) => v.to_string(),
                    Cell::Text(v) => v.clone(),
                })
                .collect();
            s.push_str(&fields.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, c) in self.columns.iter().zip(row) {
                    let v = match c {
                        Cell::Int(v) => Value::from(*v),
                        Cell::Float(Some(v)) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
                        Cell::Float(None) => Value::Null,
                        Cell::Bool(v) => Value::Bool(*v),
                        Cell::Text(v) => Value::String(v.clone()),
                    };
                    obj.insert(name.to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("plain values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Write `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// A finished table plus an optional sidecar, emitted together at the end.
pub struct Output {
    pub table: Table,
    pub sidecar: Option<(&'static str, Table)>,
}

impl Output {
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                // render everything first so a failure cannot strand one file
                let main = self.table.render(format);
                let side = self
                    .sidecar
                    .as_ref()
                    .map(|(suffix, t)| (sidecar_path(p, suffix, format), t.render(format)));
                write_atomic(p, &main)?;
                if let Some((sp, text)) = side {
                    write_atomic(&sp, &text)?;
                }
            }
            None => {
                print!("{}", self.table.render(format));
                if let Some((suffix, t)) = &self.sidecar {
                    eprintln!("# {suffix}");
                    eprint!("{}", t.render(format));
                }
            }
        }
        Ok(())
    }
}

/// `out.csv` → `out.<suffix>.csv`.
pub fn sidecar_path(path: &Path, suffix: &str, format: Format) -> std::path::PathBuf {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}
