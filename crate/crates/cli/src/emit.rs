//! Deterministic tables: fixed headers, fixed row order, shortest
//! round-trip float formatting, LF endings. Identical config and version
//! must reproduce every artifact byte for byte, so nothing here depends on
//! hash order, locale, or platform line endings.

use crate::config::OutputFormat;

pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest representation that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Optional cell; absent values stay empty rather than inventing a number.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Table {
    pub fn file_name(&self, format: OutputFormat) -> String {
        format!("{}.{}", self.name, format.extension())
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.csv(),
            OutputFormat::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of flat objects, keys in header order. Values stay the same
    /// strings the CSV would carry, so the two formats agree exactly.
    fn json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str("  {");
            for (j, (key, value)) in self.header.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&format!("\"{key}\": \"{value}\""));
            }
            out.push('}');
        }
        out.push_str("\n]\n");
        out
    }
}
