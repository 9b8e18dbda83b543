//! Structured output: one JSON report plus one CSV time series per run,
//! both byte-deterministic for a fixed config.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;

/// CSV numbers carry 17 significant digits (`{:.16e}`), enough to round-trip
/// any double exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnDoc {
    pub column: String,
    pub description: String,
}

/// A documented table: every column in the CSV is described in the JSON
/// report's schema section.
#[derive(Debug, Clone, Default)]
pub struct SeriesTable {
    pub columns: Vec<ColumnDoc>,
    pub rows: Vec<Vec<String>>,
}

impl SeriesTable {
    pub fn new(columns: &[(&str, &str)]) -> SeriesTable {
        SeriesTable {
            columns: columns
                .iter()
                .map(|(c, d)| ColumnDoc {
                    column: c.to_string(),
                    description: d.to_string(),
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.column.as_str()).collect();
        out.push_str(&escape_row(&header));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            out.push_str(&escape_row(&cells));
            out.push('\n');
        }
        out
    }
}

fn escape_row(cells: &[&str]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains(',') || c.contains('"') || c.contains('\n') {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// SHA-256 of the canonical (key-sorted) JSON form of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let value = serde_json::to_value(config).expect("config serializes");
    let canonical = serde_json::to_string(&value).expect("value serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    hex::encode(hasher.finalize())
}

/// The JSON report: run metadata, the config echo, the CSV schema, and the
/// experiment's scalar results.
#[derive(Debug, Serialize)]
pub struct ResultRecord {
    pub kind: String,
    pub config_hash: String,
    /// Wall-clock stamp (seconds since the epoch). Excluded from the
    /// determinism contract; everything else in the record is reproducible.
    pub generated_at_unix: u64,
    pub config: ExperimentConfig,
    pub schema: Vec<ColumnDoc>,
    pub results: serde_json::Value,
}

impl ResultRecord {
    pub fn new(
        kind: &str,
        config: &ExperimentConfig,
        series: &SeriesTable,
        results: serde_json::Value,
    ) -> ResultRecord {
        ResultRecord {
            kind: kind.to_string(),
            config_hash: config_hash(config),
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config: config.clone(),
            schema: series.columns.clone(),
            results,
        }
    }
}

/// Write `report.json` and `series.csv` into `out_dir` (created if needed).
pub fn emit(
    record: &ResultRecord,
    series: &SeriesTable,
    out_dir: &Path,
) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let json = serde_json::to_string_pretty(record).expect("record serializes");
    std::fs::write(out_dir.join("report.json"), json + "\n")?;
    std::fs::write(out_dir.join("series.csv"), series.to_csv())?;
    Ok(())
}
