//! File input and output: numeric CSV tables, JSON documents, and the run
//! manifest written alongside every file-producing command.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::failure::Failure;

/// A rectangular numeric table read from CSV.
#[derive(Debug)]
pub struct NumericTable {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn k(&self) -> usize {
        self.labels.len()
    }
}

/// Reads a numeric CSV table. A header row is optional: if every field of
/// the first record parses as a number the file is taken as headerless and
/// columns are named `t1..tk`. Parse failures cite the 1-based line number.
pub fn read_table(path: &Path) -> Result<NumericTable, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;

    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();

    for record in reader.records() {
        let record = record.map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        let parsed: Result<Vec<f64>, usize> = record
            .iter()
            .enumerate()
            .map(|(j, field)| field.parse::<f64>().map_err(|_| j))
            .collect();
        match (parsed, labels.is_none() && rows.is_empty()) {
            (Ok(values), first) => {
                if first {
                    labels = Some((1..=values.len()).map(|j| format!("t{j}")).collect());
                }
                let k = labels.as_ref().map_or(values.len(), Vec::len);
                if values.len() != k {
                    return Err(Failure::invalid(format!(
                        "{}: line {line}: expected {k} columns, got {}",
                        path.display(),
                        values.len()
                    )));
                }
                if let Some(j) = values.iter().position(|v| !v.is_finite()) {
                    return Err(Failure::invalid(format!(
                        "{}: line {line}: column {} is not finite",
                        path.display(),
                        j + 1
                    )));
                }
                rows.push(values);
            }
            (Err(_), true) => {
                // First record with a non-numeric field: treat it as the
                // header. A non-numeric field later is a data error.
                let names: Vec<String> = record.iter().map(str::to_string).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return Err(Failure::invalid(format!(
                        "{}: line {line}: empty column name in header",
                        path.display()
                    )));
                }
                labels = Some(names);
            }
            (Err(bad_col), false) => {
                return Err(Failure::invalid(format!(
                    "{}: line {line}: column {} is not a number",
                    path.display(),
                    bad_col + 1
                )));
            }
        }
    }

    let labels =
        labels.ok_or_else(|| Failure::invalid(format!("{}: empty file", path.display())))?;
    if rows.is_empty() {
        return Err(Failure::invalid(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(NumericTable { labels, rows })
}

/// Formats a value with 17 significant digits, enough to reproduce the
/// exact binary double on re-read.
pub fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output encodings for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Writes a numeric table to `path` as CSV or as a `{"columns", "rows"}`
/// JSON document. CSV numbers carry full round-trip precision.
pub fn write_table(
    path: &Path,
    format: TableFormat,
    labels: &[String],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), Failure> {
    match format {
        TableFormat::Csv => {
            let mut writer = csv::Writer::from_path(path)
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
            writer
                .write_record(labels)
                .and_then(|()| {
                    for row in rows {
                        let fields: Vec<String> = row.iter().map(|&v| fmt_full(v)).collect();
                        writer.write_record(&fields)?;
                    }
                    writer.flush().map_err(csv::Error::from)
                })
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
        }
        TableFormat::Json => {
            let doc = serde_json::json!({
                "columns": labels,
                "rows": rows.collect::<Vec<_>>(),
            });
            write_json(path, &doc)
        }
    }
}

/// Writes a pretty-printed JSON document with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| Failure::io(path, &e))?;
    let mut writer = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut writer, value)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    writer
        .write_all(b"\n")
        .and_then(|()| writer.flush())
        .map_err(|e| Failure::io(path, &e))
}

/// Record of one CLI run: the command, its parameters, the randomness
/// controls, and the files produced. Re-running the recorded command with
/// the recorded seed reproduces the outputs byte for byte; the manifest
/// itself is metadata and carries the wall-clock time of the run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_draws: Option<usize>,
    pub timestamp_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value) -> Self {
        RunManifest {
            schema_version: 1,
            tool: "ncst",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            params,
            seed: None,
            mc_draws: None,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .unwrap_or_default()
                .as_secs(),
            outputs: Vec::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn mc_draws(mut self, draws: usize) -> Self {
        self.mc_draws = Some(draws);
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Writes the manifest next to `anchor` as `<anchor>.manifest.json`.
    pub fn write_beside(&self, anchor: &Path) -> Result<PathBuf, Failure> {
        let mut name = anchor.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        write_json(&path, self)?;
        Ok(path)
    }

    /// Writes the manifest as `<dir>/manifest.json`.
    pub fn write_in_dir(&self, dir: &Path) -> Result<PathBuf, Failure> {
        let path = dir.join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }
}
