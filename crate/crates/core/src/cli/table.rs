use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("format must be csv or json, got {s:?}"))),
        }
    }

    /// From the output file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Missing float cells are written as this token in CSV and as `null` in
/// JSON.
pub const MISSING: &str = "NaN";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum ColumnData {
    Float(Vec<Option<f64>>),
    Int(Vec<i64>),
    Text(Vec<String>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Float(v) => v.len(),
            ColumnData::Int(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cell(&self, row: usize) -> String {
        match self {
            ColumnData::Float(v) => match v[row] {
                Some(x) => format_float(x),
                None => MISSING.to_string(),
            },
            ColumnData::Int(v) => v[row].to_string(),
            ColumnData::Text(v) => v[row].clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(flatten)]
    pub data: ColumnData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableArtifact {
    pub schema_id: String,
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<Column>,
}

/// Seventeen significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl TableArtifact {
    pub fn new(schema_id: &str) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        TableArtifact {
            schema_id: schema_id.into(),
            metadata,
            columns: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn meta_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta(key, format_float(value))
    }

    pub fn push(&mut self, name: &str, data: ColumnData) -> &mut Self {
        self.columns.push(Column {
            name: name.into(),
            data,
        });
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    pub fn column(&self, name: &str) -> Option<&ColumnData> {
        self.columns.iter().find(|c| c.name == name).map(|c| &c.data)
    }

    pub fn validate(&self) -> Result<()> {
        let rows = self.rows();
        if let Some(c) = self.columns.iter().find(|c| c.data.len() != rows) {
            return Err(Error::Precondition(format!(
                "column {} has {} rows, expected {rows}",
                c.name,
                c.data.len()
            )));
        }
        let bad = |s: &str| s.contains(',') || s.contains('\n');
        if self.columns.iter().any(|c| bad(&c.name)) || self.metadata.iter().any(|(k, v)| k.contains(':') || v.contains('\n')) {
            return Err(Error::Precondition("names and metadata must not contain separators".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        let _ = writeln!(out, "# schema_id: {}", self.schema_id);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for r in 0..self.rows() {
            let cells: Vec<String> = self.columns.iter().map(|c| c.data.cell(r)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn write_table(artifact: &TableArtifact, format: Format, path: &Path) -> Result<()> {
    let text = artifact.render(format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json(path: &Path) -> Result<TableArtifact> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TableArtifact {
        let mut t = TableArtifact::new("demo");
        t.meta_float("t1", 2.5);
        t.push("N", ColumnData::Int(vec![2, 3]))
            .push("x", ColumnData::Float(vec![Some(0.1), None]))
            .push("tag", ColumnData::Text(vec!["a".into(), "b".into()]));
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema_id: demo");
        assert_eq!(lines[1], "# t1: 2.5000000000000000e0");
        assert_eq!(lines[3], "N,x,tag");
        assert_eq!(lines[4], "2,1.0000000000000001e-1,a");
        assert_eq!(lines[5], "3,NaN,b");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn ragged_rejected() {
        let mut t = sample();
        t.push("y", ColumnData::Int(vec![1]));
        assert!(t.to_csv().is_err());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.2250738585072014e-308, 1e300, 0.223_143_551_314_209_76] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
