//! Result records and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Float(v)
        } else {
            Cell::Null
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::from)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format!("{f:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    pub library_version: String,
    pub parameters: BTreeMap<String, Cell>,
    pub scalars: BTreeMap<String, Cell>,
    pub tables: BTreeMap<String, Table>,
    /// Only recorded when timing is requested, so plain runs stay byte-identical.
    pub duration_seconds: Option<f64>,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_owned(),
            library_version: pbl_core::VERSION.to_owned(),
            parameters: BTreeMap::new(),
            scalars: BTreeMap::new(),
            tables: BTreeMap::new(),
            duration_seconds: None,
        }
    }

    pub fn param(&mut self, name: &str, value: impl Into<Cell>) -> &mut Self {
        self.parameters.insert(name.to_owned(), value.into());
        self
    }

    pub fn scalar(&mut self, name: &str, value: impl Into<Cell>) -> &mut Self {
        self.scalars.insert(name.to_owned(), value.into());
        self
    }

    pub fn table(&mut self, name: &str, table: Table) -> &mut Self {
        self.tables.insert(name.to_owned(), table);
        self
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let mut out = serde_json::to_vec_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    /// Comment lines (`# key = value`) for metadata, parameters and scalars,
    /// then one block per table, each introduced by `# table: name`.
    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        let internal = |e: std::io::Error| CliError::Internal(e.to_string());
        writeln!(out, "# schema_version = {}", self.schema_version).map_err(internal)?;
        writeln!(out, "# command = {}", self.command).map_err(internal)?;
        writeln!(out, "# library_version = {}", self.library_version).map_err(internal)?;
        if let Some(d) = self.duration_seconds {
            writeln!(out, "# duration_seconds = {}", Cell::from(d).csv_field()).map_err(internal)?;
        }
        for (k, v) in &self.parameters {
            writeln!(out, "# parameter {k} = {}", v.csv_field()).map_err(internal)?;
        }
        for (k, v) in &self.scalars {
            writeln!(out, "# scalar {k} = {}", v.csv_field()).map_err(internal)?;
        }
        for (name, table) in &self.tables {
            writeln!(out, "# table: {name}").map_err(internal)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Internal(e.to_string());
            w.write_record(&table.columns).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv_field)).map_err(csv_err)?;
            }
            out.extend(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?);
        }
        Ok(out)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Invalid(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
