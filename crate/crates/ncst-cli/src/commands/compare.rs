//! `ncst compare`: fit all four nested families and rank them by AIC.
//!
//! The run succeeds (exit 0) as long as at least one family could be fit;
//! families that fail are recorded in the JSON document rather than
//! aborting the rest.

use std::path::PathBuf;

use clap::Args;
use ncst::compare_models;
use serde::Serialize;

use crate::failure::{Failure, EXIT_OK};
use crate::fit_support::{
    load_data, table_line, FitControl, FitJson, Standardization, TABLE_HEADER,
};
use crate::io::{write_json, RunManifest};

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// CSV of observations, one row per vector (header optional).
    #[arg(long)]
    pub data: PathBuf,

    #[command(flatten)]
    pub control: FitControl,

    /// Output JSON file; omit to print the document to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct FailureJson {
    family: &'static str,
    error: String,
}

#[derive(Serialize)]
struct CompareDocument {
    schema_version: u32,
    data: String,
    n_obs: usize,
    k: usize,
    standardize: Option<Standardization>,
    /// Successful fits, best AIC first.
    models: Vec<FitJson>,
    failures: Vec<FailureJson>,
    best_aic: Option<&'static str>,
    best_sic: Option<&'static str>,
}

pub fn run(args: &CompareArgs) -> Result<i32, Failure> {
    let (data, standardize) = load_data(&args.data, args.control.standardize)?;
    let comparison = compare_models(&data, &args.control.options())?;

    let document = CompareDocument {
        schema_version: 1,
        data: args.data.display().to_string(),
        n_obs: data.n(),
        k: data.k(),
        standardize,
        models: comparison.fits.iter().map(FitJson::from_result).collect(),
        failures: comparison
            .failures
            .iter()
            .map(|(family, err)| FailureJson {
                family: family.label(),
                error: err.to_string(),
            })
            .collect(),
        best_aic: comparison.best_by_aic().map(|f| f.family.label()),
        best_sic: comparison.best_by_sic().map(|f| f.family.label()),
    };

    println!("{TABLE_HEADER}");
    for fit in &comparison.fits {
        println!("{}", table_line(fit));
    }
    if comparison.fits.iter().any(|f| !f.converged) {
        println!("* optimizer stopped at its iteration cap");
    }
    for (family, err) in &comparison.failures {
        println!("{:<6} failed: {err}", family.label());
    }

    if let Some(out) = &args.out {
        write_json(out, &document)?;
        RunManifest::new(
            "compare",
            serde_json::json!({
                "data": args.data.display().to_string(),
                "control": args.control.manifest_value(),
            }),
        )
        .seed(args.control.seed)
        .mc_draws(args.control.mc_draws)
        .output(out)
        .write_beside(out)?;
        println!("wrote {}", out.display());
    } else {
        let text =
            serde_json::to_string_pretty(&document).map_err(|e| Failure::invalid(e.to_string()))?;
        println!("{text}");
    }

    Ok(EXIT_OK)
}
