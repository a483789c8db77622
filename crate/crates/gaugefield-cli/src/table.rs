//! Field-table CSV emission and re-parsing.
//!
//! Output is byte-deterministic: fixed column order, shortest round-trip
//! float formatting, LF line endings, and a units header line, so identical
//! configs produce identical files.

use crate::CliError;

pub const UNITS_HEADER: &str = "# units: HL, c=hbar=1";

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FieldTable {
    pub fn new(columns: &[&str]) -> Self {
        FieldTable { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Numerical(format!(
                "row width {} does not match {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Numerical(format!("non-finite table value {v}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(UNITS_HEADER);
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse a table this tool emitted. Used by the round-trip tests and
    /// available to downstream consumers of the CSV files.
    pub fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CliError::Config(String::from("empty table")))?;
        if header != UNITS_HEADER {
            return Err(CliError::Config(format!("unexpected units header: {header}")));
        }
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| CliError::Config(String::from("missing column header")))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            let row = row.map_err(|e| {
                CliError::Config(format!("bad value on data line {}: {e}", i + 1))
            })?;
            if row.len() != columns.len() {
                return Err(CliError::Config(format!(
                    "data line {} has {} fields, expected {}",
                    i + 1,
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(FieldTable { columns, rows })
    }
}
