//! `ncst wdbc`: extract the three diagnostic standard-error features
//! (concavity, symmetry, fractal dimension) from a breast-tumor dataset.
//!
//! Two layouts are accepted: a headered CSV with named columns, and the
//! headerless 32-column layout (case id, diagnosis, then thirty features:
//! ten means, ten standard errors, ten worst values, each block in the
//! order radius, texture, perimeter, area, smoothness, compactness,
//! concavity, concave points, symmetry, fractal dimension).

use std::path::{Path, PathBuf};

use clap::Args;

use crate::failure::{Failure, EXIT_OK};
use crate::io::{write_table, RunManifest, TableFormat};

const WANTED: [&str; 3] = ["concavity_se", "symmetry_se", "fractal_dimension_se"];

/// 0-based positions of the wanted columns in the headerless layout: the
/// standard-error block starts at column 12, and concavity, symmetry, and
/// fractal dimension are its 7th, 9th, and 10th entries.
const HEADERLESS_POSITIONS: [usize; 3] = [18, 20, 21];
const HEADERLESS_WIDTH: usize = 32;

#[derive(Debug, Args)]
pub struct WdbcArgs {
    /// Input CSV (headered with named columns, or headerless 32-column).
    #[arg(long)]
    pub input: PathBuf,

    /// Output file with the three extracted columns.
    #[arg(long)]
    pub out: PathBuf,

    /// Output encoding.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

/// A field that is neither a number nor a diagnosis code marks the first
/// record as a header row.
fn is_header_record(record: &csv::StringRecord) -> bool {
    record
        .iter()
        .any(|field| field.parse::<f64>().is_err() && field != "M" && field != "B")
}

fn named_positions(header: &csv::StringRecord, path: &Path) -> Result<[usize; 3], Failure> {
    let names: Vec<String> = header.iter().map(|h| h.trim().to_lowercase()).collect();
    let mut positions = [0usize; 3];
    let mut missing = Vec::new();
    for (slot, wanted) in WANTED.iter().enumerate() {
        match names.iter().position(|n| n == wanted) {
            Some(idx) => positions[slot] = idx,
            None => missing.push(*wanted),
        }
    }
    if missing.is_empty() {
        Ok(positions)
    } else {
        Err(Failure::invalid(format!(
            "{}: missing column(s): {}",
            path.display(),
            missing.join(", ")
        )))
    }
}

pub fn run(args: &WdbcArgs) -> Result<i32, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(&args.input)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?;

    let mut records = reader.records();
    let first = match records.next() {
        Some(record) => {
            record.map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?
        }
        None => {
            return Err(Failure::invalid(format!(
                "{}: empty file",
                args.input.display()
            )))
        }
    };

    let (positions, mut pending) = if is_header_record(&first) {
        (named_positions(&first, &args.input)?, Vec::new())
    } else if first.len() == HEADERLESS_WIDTH {
        (HEADERLESS_POSITIONS, vec![first])
    } else {
        return Err(Failure::invalid(format!(
            "{}: unrecognized layout: headerless input must have {HEADERLESS_WIDTH} columns, got {}; \
             headered input must name {}",
            args.input.display(),
            first.len(),
            WANTED.join(", ")
        )));
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut extract = |record: csv::StringRecord| -> Result<(), Failure> {
        let line = record.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(3);
        for (slot, &idx) in positions.iter().enumerate() {
            let field = record.get(idx).ok_or_else(|| {
                Failure::invalid(format!(
                    "{}: line {line}: row has {} fields, {} needs column {}",
                    args.input.display(),
                    record.len(),
                    WANTED[slot],
                    idx + 1
                ))
            })?;
            let value: f64 = field.parse().map_err(|_| {
                Failure::invalid(format!(
                    "{}: line {line}: {} is not a number ({field:?})",
                    args.input.display(),
                    WANTED[slot]
                ))
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(Failure::invalid(format!(
                    "{}: line {line}: {} must be finite and nonnegative, got {value}",
                    args.input.display(),
                    WANTED[slot]
                )));
            }
            row.push(value);
        }
        rows.push(row);
        Ok(())
    };

    for record in pending.drain(..) {
        extract(record)?;
    }
    for record in records {
        let record =
            record.map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?;
        extract(record)?;
    }

    if rows.is_empty() {
        return Err(Failure::invalid(format!(
            "{}: no data rows",
            args.input.display()
        )));
    }

    let labels: Vec<String> = WANTED.iter().map(|s| s.to_string()).collect();
    let n = rows.len();
    write_table(&args.out, args.format, &labels, rows.into_iter())?;

    RunManifest::new(
        "wdbc",
        serde_json::json!({
            "input": args.input.display().to_string(),
            "format": format!("{:?}", args.format).to_lowercase(),
        }),
    )
    .output(&args.out)
    .write_beside(&args.out)?;

    println!(
        "extracted {n} rows x {} columns to {}",
        WANTED.len(),
        args.out.display()
    );
    Ok(EXIT_OK)
}
