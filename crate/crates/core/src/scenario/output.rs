use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::spec::ScenarioSpec;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Column name and unit; the CSV header reads `name [unit]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File-name suffix, e.g. `populations`.
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io {
            path: self.name.clone(),
            source: std::io::Error::other(e),
        };
        w.write_record(self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)))
            .map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io {
            path: self.name.clone(),
            source: e.into_error(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub unit: String,
}

/// Integrator settings of a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub method: String,
    /// Fixed step, s (absent for closed-form scenarios).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOutput {
    pub tables: Vec<Table>,
    pub summary: Vec<Metric>,
    pub solver: SolverReport,
}

impl ScenarioOutput {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.summary.iter().find(|m| m.name == name).map(|m| m.value)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// One-row table of the summary metrics.
    pub fn summary_table(&self) -> Table {
        let cols: Vec<(&str, &str)> = self.summary.iter().map(|m| (m.name.as_str(), m.unit.as_str())).collect();
        let mut t = Table::new("summary", &cols);
        t.push(self.summary.iter().map(|m| Cell::Num(m.value)).collect());
        t
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub tool_version: String,
    pub integrator: SolverReport,
    pub wall_clock_seconds: f64,
    /// File name to SHA-256 hex digest.
    pub files: BTreeMap<String, String>,
    pub parameters: ScenarioSpec,
}

pub const MANIFEST_FILE: &str = "manifest.toml";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Write `<name>-<table>.csv`, `<name>-summary.csv` and the manifest into
/// `dir`. `spec` must be the resolved spec the output came from.
pub fn write_run(dir: &Path, spec: &ScenarioSpec, output: &ScenarioOutput, wall_clock_seconds: f64) -> Result<RunManifest> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files = BTreeMap::new();
    for table in output.tables.iter().chain(std::iter::once(&output.summary_table())) {
        let file = format!("{}-{}.csv", spec.name, table.name);
        let csv = table.to_csv()?;
        write_file(&dir.join(&file), &csv)?;
        files.insert(file, sha256_hex(csv.as_bytes()));
    }
    let manifest = RunManifest {
        scenario: spec.name.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        integrator: output.solver.clone(),
        wall_clock_seconds,
        files,
        parameters: spec.clone(),
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::Config {
        message: e.to_string(),
        line: None,
        field: None,
    })?;
    write_file(&dir.join(MANIFEST_FILE), &text)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_headers_carry_units() {
        let mut t = Table::new("x", &[("time", "s"), ("label", "")]);
        t.push(vec![1.5e-9.into(), "a,b".into()]);
        assert_eq!(t.to_csv().unwrap(), "time [s],label []\n1.5e-9,\"a,b\"\n");
    }
}
