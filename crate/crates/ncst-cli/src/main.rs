//! Command-line front end for the non-central skew-t library: sampling,
//! density evaluation, model fitting and comparison, simulation studies,
//! quadratic-form validation, and tumor-data feature extraction.
//!
//! Exit codes: 0 success; 2 invalid input; 3 a named mathematical condition
//! fails for the given inputs; 4 the optimizer stopped at its iteration cap
//! (results are still written).

mod commands;
mod failure;
mod fit_support;
mod io;
mod params;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ncst",
    version,
    about = "Non-central skew-t distributions: sampling, densities, fitting, and quadratic forms",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw vectors from the skew-normal or non-central skew-t.
    Sample(commands::sample::SampleArgs),
    /// Evaluate log-densities at points from a CSV file.
    Density(commands::density::DensityArgs),
    /// Fit one model family by maximum likelihood.
    Fit(commands::fit::FitArgs),
    /// Fit all four nested families and rank them by AIC.
    Compare(commands::compare::CompareArgs),
    /// Run a fixed simulation study and emit summaries and density grids.
    Simstudy(commands::simstudy::SimstudyArgs),
    /// Analyze a quadratic form and validate its skew-F characterization.
    Quadform(commands::quadform::QuadformArgs),
    /// Extract the three diagnostic features from a breast-tumor CSV.
    Wdbc(commands::wdbc::WdbcArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample(args) => commands::sample::run(args),
        Command::Density(args) => commands::density::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::Simstudy(args) => commands::simstudy::run(args),
        Command::Quadform(args) => commands::quadform::run(args),
        Command::Wdbc(args) => commands::wdbc::run(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
