//! `ncst fit`: maximum-likelihood fit of one model family.

use std::path::PathBuf;

use clap::Args;
use ncst::fit_model;
use serde::Serialize;

use crate::failure::{Failure, EXIT_NO_CONVERGENCE, EXIT_OK};
use crate::fit_support::{load_data, FamilyArg, FitControl, FitJson, Standardization};
use crate::io::{write_json, RunManifest};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV of observations, one row per vector (header optional).
    #[arg(long)]
    pub data: PathBuf,

    /// Family to fit.
    #[arg(long, value_enum)]
    pub model: FamilyArg,

    #[command(flatten)]
    pub control: FitControl,

    /// Output JSON file; omit to print the document to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct FitDocument {
    schema_version: u32,
    data: String,
    standardize: Option<Standardization>,
    fit: FitJson,
}

pub fn run(args: &FitArgs) -> Result<i32, Failure> {
    let (data, standardize) = load_data(&args.data, args.control.standardize)?;
    let fit = fit_model(&data, args.model.family(), &args.control.options())?;

    let document = FitDocument {
        schema_version: 1,
        data: args.data.display().to_string(),
        standardize,
        fit: FitJson::from_result(&fit),
    };

    match &args.out {
        Some(out) => {
            write_json(out, &document)?;
            RunManifest::new(
                "fit",
                serde_json::json!({
                    "data": args.data.display().to_string(),
                    "model": format!("{:?}", args.model).to_lowercase(),
                    "control": args.control.manifest_value(),
                }),
            )
            .seed(args.control.seed)
            .mc_draws(args.control.mc_draws)
            .output(out)
            .write_beside(out)?;
            println!(
                "{}: loglik {:.4}, AIC {:.4}, SIC {:.4} ({} parameters, n = {}) -> {}",
                fit.family.label(),
                fit.loglik,
                fit.aic,
                fit.sic,
                fit.n_params,
                fit.n_obs,
                out.display()
            );
        }
        None => {
            let text = serde_json::to_string_pretty(&document)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            println!("{text}");
        }
    }

    if fit.converged {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "warning: optimizer did not meet its tolerance within {} iterations; results written",
            fit.iterations
        );
        Ok(EXIT_NO_CONVERGENCE)
    }
}
