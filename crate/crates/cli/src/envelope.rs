use std::collections::BTreeMap;
use std::io::Write;

use lagrange_core::verify::Check;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

/// Every command produces one of these; JSON is the canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    /// A list of flat rows, so the CSV projection is always possible.
    pub results: Vec<Map<String, Value>>,
    pub checks: Vec<Check>,
}

impl ReportEnvelope {
    pub fn new(command: impl Into<String>) -> Self {
        ReportEnvelope {
            schema: SCHEMA,
            command: command.into(),
            params: BTreeMap::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.into(), to_value(value));
        self
    }

    /// Appends a row; `row` must serialize to a JSON object.
    pub fn row(&mut self, row: impl Serialize) {
        match to_value(row) {
            Value::Object(m) => self.results.push(m),
            other => panic!("result rows must be objects, got {other}"),
        }
    }

    pub fn checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    /// The result rows as CSV, columns in first-appearance order. Nested
    /// objects become dotted columns (`value.re`); arrays are written as
    /// compact JSON.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let rows: Vec<Vec<(String, String)>> = self
            .results
            .iter()
            .map(|row| {
                let mut cells = Vec::new();
                flatten("", row, &mut cells);
                cells
            })
            .collect();
        let mut columns: Vec<&str> = Vec::new();
        for row in &rows {
            for (k, _) in row {
                if !columns.contains(&k.as_str()) {
                    columns.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&columns)?;
        for row in &rows {
            w.write_record(columns.iter().map(|c| {
                row.iter()
                    .find(|(k, _)| k == c)
                    .map(|(_, v)| v.as_str())
                    .unwrap_or("")
            }))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn flatten(prefix: &str, obj: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in obj {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) => flatten(&key, inner, out),
            Value::Null => out.push((key, String::new())),
            Value::String(s) => out.push((key, s.clone())),
            other => out.push((key, other.to_string())),
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}
