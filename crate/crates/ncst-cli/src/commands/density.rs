//! `ncst density`: evaluate log-densities at points read from a CSV file.
//!
//! Skew-normal densities are exact; non-central skew-t densities are Monte
//! Carlo scale-mixture estimates with a frozen draw set shared across all
//! points, so the whole scan is smooth and reproducible for a given seed.

use std::path::PathBuf;

use clap::Args;
use ncst::{sn_logpdf, DVector, McConfig, MixingDraws, NcstMcDensity};

use crate::failure::{Failure, EXIT_OK};
use crate::io::{read_table, write_table, RunManifest, TableFormat};
use crate::params::{Dist, DistArgs, DistKind};

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Distribution to evaluate.
    #[arg(long, value_enum)]
    pub dist: DistKind,

    #[command(flatten)]
    pub params: DistArgs,

    /// CSV of evaluation points, one k-dimensional point per row.
    #[arg(long)]
    pub points: PathBuf,

    /// Monte Carlo draws for the mixture estimate (ncst only).
    #[arg(short = 'M', long, default_value_t = ncst::config::DEFAULT_REPORT_M)]
    pub mc_draws: usize,

    /// RNG seed for the mixture draws (ncst only).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file: the input columns plus a log_density column.
    #[arg(long)]
    pub out: PathBuf,

    /// Output encoding.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

pub fn run(args: &DensityArgs) -> Result<i32, Failure> {
    let dist = args.params.for_kind(args.dist)?;
    let table = read_table(&args.points)?;
    if table.k() != dist.dim() {
        return Err(Failure::invalid(format!(
            "{}: points have {} columns but the distribution is {}-dimensional",
            args.points.display(),
            table.k(),
            dist.dim()
        )));
    }

    let mut labels = table.labels.clone();
    labels.push("log_density".to_string());

    let log_densities: Vec<f64> = match &dist {
        Dist::Sn(p) => table
            .rows
            .iter()
            .map(|row| sn_logpdf(p, &DVector::from_row_slice(row)).map_err(Failure::from))
            .collect::<Result<_, _>>()?,
        Dist::Ncst(p) => {
            let cfg = McConfig::new(args.mc_draws, args.seed, true)?;
            let draws = MixingDraws::from_config(&cfg)?;
            let mut density = NcstMcDensity::new(p, &draws)?;
            table
                .rows
                .iter()
                .map(|row| {
                    density
                        .logpdf(&DVector::from_row_slice(row))
                        .map_err(Failure::from)
                })
                .collect::<Result<_, _>>()?
        }
    };

    let rows = table.rows.iter().zip(&log_densities).map(|(row, &ld)| {
        let mut out = row.clone();
        out.push(ld);
        out
    });
    write_table(&args.out, args.format, &labels, rows)?;

    let mut manifest = RunManifest::new(
        "density",
        serde_json::json!({
            "dist": format!("{:?}", args.dist).to_lowercase(),
            "params": args.params.manifest_value(),
            "points": args.points.display().to_string(),
            "format": format!("{:?}", args.format).to_lowercase(),
        }),
    )
    .output(&args.out);
    if matches!(dist, Dist::Ncst(_)) {
        manifest = manifest.seed(args.seed).mc_draws(args.mc_draws);
    }
    manifest.write_beside(&args.out)?;

    println!(
        "evaluated {} points, wrote {}",
        table.rows.len(),
        args.out.display()
    );
    Ok(EXIT_OK)
}
