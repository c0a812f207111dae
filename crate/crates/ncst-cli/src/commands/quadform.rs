//! `ncst quadform`: analyze the quadratic form T' W T of a non-central
//! skew-t vector and, optionally, validate its skew-F characterization by
//! simulation.
//!
//! The weight matrix can be given directly (`--w`) or built from a
//! direction `d` (`--direction`), which produces the unique W projecting
//! onto span(d) in the scale-whitened space; such a W always satisfies the
//! idempotency condition the theory requires.

use std::path::PathBuf;

use clap::Args;
use ncst::numerics::{spd_inverse, sym_sqrt};
use ncst::{quadform_validate_against, DMatrix, DVector, QuadFormAnalysis, RngStream, SkewFParams};
use serde::Serialize;

use crate::failure::{Failure, EXIT_OK};
use crate::io::{write_json, RunManifest};
use crate::params::{parse_matrix, parse_vector, DistArgs};

#[derive(Debug, Args)]
pub struct QuadformArgs {
    #[command(flatten)]
    pub params: DistArgs,

    /// Weight matrix: k*k row-major entries, or k diagonal entries.
    #[arg(long, conflicts_with = "direction")]
    pub w: Option<String>,

    /// Direction d (k entries); builds the scale-whitened projector onto
    /// span(d), the canonical weight matrix satisfying the idempotency
    /// condition.
    #[arg(long)]
    pub direction: Option<String>,

    /// Validation draws; 0 skips simulation and reports the analysis only.
    #[arg(short, long, default_value_t = 100_000)]
    pub n: usize,

    /// RNG seed (required when validation draws are requested).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Override the reference non-centrality, keeping the other reference
    /// parameters from the analysis. A deliberately wrong value here is the
    /// standard negative control: the KS distance should become large.
    #[arg(long)]
    pub reference_lambda: Option<f64>,

    /// Output JSON file; omit to print the document to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct AnalysisJson {
    /// Rank of the scale-whitened weight matrix.
    m: usize,
    lambda: f64,
    c_alpha: f64,
    nu: Vec<f64>,
    alpha_star: f64,
    effective_shape: Vec<f64>,
    condition_iii_residual: f64,
    r: f64,
}

impl AnalysisJson {
    fn new(a: &QuadFormAnalysis) -> Self {
        AnalysisJson {
            m: a.m(),
            lambda: a.lambda(),
            c_alpha: a.c_alpha(),
            nu: a.nu().iter().copied().collect(),
            alpha_star: a.alpha_star(),
            effective_shape: a.effective_shape().iter().copied().collect(),
            condition_iii_residual: a.condition_iii_residual(),
            r: a.r(),
        }
    }
}

#[derive(Serialize)]
struct ReferenceJson {
    df1: f64,
    df2: f64,
    lambda: f64,
    alpha_star: f64,
}

#[derive(Serialize)]
struct QqPoint {
    p: f64,
    sample: f64,
    reference: f64,
}

#[derive(Serialize)]
struct ValidationJson {
    n: usize,
    seed: u64,
    reference: ReferenceJson,
    /// Two-sample KS distance, both sides truncated at their own 99.9th
    /// percentile so a handful of extreme draws cannot dominate.
    ks: f64,
    qq: Vec<QqPoint>,
}

#[derive(Serialize)]
struct QuadformDocument {
    schema_version: u32,
    analysis: AnalysisJson,
    validation: Option<ValidationJson>,
}

/// W = S^{-1} (u u' / |u|^2) S^{-1} with S = Omega^{1/2} and u = S d: the
/// scale-whitened projector onto span(d).
fn direction_weight(omega: &DMatrix<f64>, d: &[f64]) -> Result<DMatrix<f64>, Failure> {
    let k = omega.nrows();
    if d.len() != k {
        return Err(Failure::invalid(format!(
            "--direction: expected {k} entries to match --xi, got {}",
            d.len()
        )));
    }
    let s = sym_sqrt(omega)?;
    let s_inv = sym_sqrt(&spd_inverse(omega)?)?;
    let u = &s * DVector::from_row_slice(d);
    let norm2 = u.dot(&u);
    if norm2 <= 0.0 {
        return Err(Failure::invalid("--direction: zero direction"));
    }
    let p = &u * u.transpose() / norm2;
    Ok(&s_inv * p * &s_inv)
}

pub fn run(args: &QuadformArgs) -> Result<i32, Failure> {
    let p = args.params.ncst()?;
    let k = p.dim();
    let w = match (&args.w, &args.direction) {
        (Some(text), None) => parse_matrix("w", text, k)?,
        (None, Some(text)) => direction_weight(p.sn().omega(), &parse_vector("direction", text)?)?,
        (None, None) => {
            return Err(Failure::invalid("one of --w or --direction is required"));
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };

    let analysis = ncst::quadform_analyze(&p, &w)?;

    let validation = if args.n == 0 {
        None
    } else {
        let seed = args.seed.ok_or_else(|| {
            Failure::invalid("--seed is required when validation draws are requested (use -n 0 for analysis only)")
        })?;
        let implied = analysis.skew_f_params()?;
        let reference = match args.reference_lambda {
            Some(lambda) => {
                SkewFParams::new(implied.df1(), implied.df2(), lambda, implied.alpha_star())?
            }
            None => implied,
        };
        let stream = RngStream::new(seed);
        let validation = quadform_validate_against(&p, &w, reference, args.n, &stream)?;
        Some(ValidationJson {
            n: args.n,
            seed,
            reference: ReferenceJson {
                df1: validation.reference.df1(),
                df2: validation.reference.df2(),
                lambda: validation.reference.lambda(),
                alpha_star: validation.reference.alpha_star(),
            },
            ks: validation.ks,
            qq: validation
                .qq
                .iter()
                .map(|&(p, sample, reference)| QqPoint {
                    p,
                    sample,
                    reference,
                })
                .collect(),
        })
    };

    let document = QuadformDocument {
        schema_version: 1,
        analysis: AnalysisJson::new(&analysis),
        validation,
    };

    println!(
        "rank m = {}, lambda = {:.6}, c_alpha = {:.6}, alpha_star = {:.6}, condition-iii residual = {:.3e}",
        analysis.m(),
        analysis.lambda(),
        analysis.c_alpha(),
        analysis.alpha_star(),
        analysis.condition_iii_residual(),
    );
    if let Some(v) = &document.validation {
        println!(
            "validation: n = {}, reference lambda = {:.6}, KS = {:.5}",
            v.n, v.reference.lambda, v.ks
        );
    }

    if let Some(out) = &args.out {
        write_json(out, &document)?;
        let mut manifest = RunManifest::new(
            "quadform",
            serde_json::json!({
                "params": args.params.manifest_value(),
                "w": args.w,
                "direction": args.direction,
                "n": args.n,
                "reference_lambda": args.reference_lambda,
            }),
        )
        .output(out);
        if let Some(v) = &document.validation {
            manifest = manifest.seed(v.seed);
        }
        manifest.write_beside(out)?;
        println!("wrote {}", out.display());
    } else {
        let text =
            serde_json::to_string_pretty(&document).map_err(|e| Failure::invalid(e.to_string()))?;
        println!("{text}");
    }

    Ok(EXIT_OK)
}
