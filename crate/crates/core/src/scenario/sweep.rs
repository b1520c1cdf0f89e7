use serde::{Deserialize, Serialize};

use super::output::{Cell, Table};
use super::run::run_scenario;
use super::spec::ScenarioSpec;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Parameter path and the SI values it took.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub path: String,
    pub values: Vec<f64>,
}

fn to_table(spec: &ScenarioSpec) -> Result<toml::Table> {
    toml::Table::try_from(spec).map_err(|e| Error::Config {
        message: e.to_string(),
        line: None,
        field: None,
    })
}

/// Full dotted path for `path`, which may omit the `experiment.<kind>.`
/// prefix.
fn full_path(spec: &ScenarioSpec, path: &str) -> Result<Vec<String>> {
    let root = to_table(spec)?;
    let parts: Vec<String> = path.split('.').map(str::to_string).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::UnresolvedPath(path.to_string()));
    }
    if root.contains_key(&parts[0]) {
        return Ok(parts);
    }
    let kind = root
        .get("experiment")
        .and_then(|e| e.as_table())
        .and_then(|t| t.keys().next().cloned())
        .ok_or_else(|| Error::UnresolvedPath(path.to_string()))?;
    Ok(["experiment".to_string(), kind].into_iter().chain(parts).collect())
}

fn get<'a>(root: &'a toml::Table, parts: &[String]) -> Option<&'a toml::Value> {
    let (last, parents) = parts.split_last()?;
    let mut t = root;
    for p in parents {
        t = t.get(p)?.as_table()?;
    }
    t.get(last)
}

/// Copy of `spec` with the value at `path` replaced. Optional inputs that
/// are absent can be set as long as the field exists.
pub fn set_parameter(spec: &ScenarioSpec, path: &str, value: toml::Value) -> Result<ScenarioSpec> {
    let parts = full_path(spec, path)?;
    let mut root = to_table(spec)?;
    let (last, parents) = parts.split_last().expect("non-empty path");
    let mut t = &mut root;
    for p in parents {
        t = t
            .get_mut(p)
            .and_then(|v| v.as_table_mut())
            .ok_or_else(|| Error::UnresolvedPath(path.to_string()))?;
    }
    t.insert(last.clone(), value);
    toml::Value::Table(root).try_into::<ScenarioSpec>().map_err(|e| {
        let message = e.to_string();
        if message.contains("unknown field") {
            Error::UnresolvedPath(path.to_string())
        } else {
            Error::Config {
                message: message.trim().to_string(),
                line: None,
                field: Some(path.to_string()),
            }
        }
    })
}

/// Parse a command-line value: a TOML scalar when it is one, else a
/// quantity string such as `1.1 MHz`.
pub fn parse_value(text: &str) -> toml::Value {
    let text = text.trim();
    toml::from_str::<toml::Table>(&format!("v = {text}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_string()))
}

/// Independent runs of `spec` with `path` set to each value; one row per
/// value, in input order, with the value in SI followed by the summary.
pub fn sweep(exec: Exec, spec: &ScenarioSpec, path: &str, values: &[toml::Value]) -> Result<(Table, SweepRecord)> {
    if values.is_empty() {
        return Err(Error::param("values", "need at least one value"));
    }
    let specs: Vec<ScenarioSpec> = values
        .iter()
        .map(|v| set_parameter(spec, path, v.clone()))
        .collect::<Result<_>>()?;
    let parts = full_path(spec, path)?;
    let si: Vec<f64> = specs
        .iter()
        .map(|s| {
            let root = to_table(s)?;
            get(&root, &parts)
                .and_then(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
                .ok_or_else(|| Error::UnresolvedPath(path.to_string()))
        })
        .collect::<Result<_>>()?;
    let outputs = par::try_map(exec, &specs, |s| run_scenario(s, exec))?;
    let first = &outputs[0].summary;
    let mut cols: Vec<(&str, &str)> = vec![(path, "SI")];
    cols.extend(first.iter().map(|m| (m.name.as_str(), m.unit.as_str())));
    let mut table = Table::new("sweep", &cols);
    for (x, out) in si.iter().zip(&outputs) {
        let mut row: Vec<Cell> = vec![(*x).into()];
        row.extend(first.iter().map(|m| Cell::Num(out.metric(&m.name).unwrap_or(f64::NAN))));
        table.push(row);
    }
    Ok((
        table,
        SweepRecord {
            path: parts.join("."),
            values: si,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;

    #[test]
    fn paths_resolve_with_or_without_prefix() {
        let spec = builtin("impedance").unwrap();
        let a = set_parameter(&spec, "target", parse_value("50")).unwrap();
        let b = set_parameter(&spec, "experiment.impedance.target", parse_value("\"50 ohm\"")).unwrap();
        assert_eq!(a, b);
        assert!(matches!(set_parameter(&spec, "nonsense", parse_value("1")), Err(Error::UnresolvedPath(_))));
        assert!(matches!(set_parameter(&spec, "a..b", parse_value("1")), Err(Error::UnresolvedPath(_))));
    }

    #[test]
    fn value_parsing() {
        assert_eq!(parse_value("3"), toml::Value::Integer(3));
        assert_eq!(parse_value("2.5"), toml::Value::Float(2.5));
        assert_eq!(parse_value("1.1 MHz"), toml::Value::String("1.1 MHz".into()));
    }
}
