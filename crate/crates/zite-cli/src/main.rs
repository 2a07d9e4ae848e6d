//! `zite` — zero-index transmission eigenvalues with a conductive boundary.
//!
//! Subcommands: `compute` (Galerkin eigenvalues), `reference` (exact
//! dispersion-relation roots on the disk), `estimate` (effective refractive
//! index from the first eigenvalue), `convergence` (basis-refinement study).
//!
//! Exit codes: 0 success, 2 configuration/validation failure, 3 numerical
//! failure.

mod config;
mod output;
mod tasks;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum AppError {
    /// Invalid configuration or CLI usage; exit code 2.
    Config(String),
    /// Assembly/solve/IO failure after validation; exit code 3.
    Runtime(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "config error: {msg}"),
            AppError::Runtime(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "zite", version, about = "Zero-index transmission eigenvalues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Galerkin system and list eigenvalues with residuals.
    Compute(RunArgs),
    /// Exact dispersion-relation roots (unit disk, constant coefficients).
    Reference(RunArgs),
    /// Estimate a constant effective index from the first eigenvalue.
    Estimate(RunArgs),
    /// Basis-refinement study of the first eigenvalue.
    Convergence(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Also write the table to this file (same bytes as stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Compute only: sample the first eigenfunction on a res x res
    /// parameter grid, written to <out stem>.grid.csv. Requires --out.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("{err}");
        let code = match err {
            AppError::Config(_) => 2,
            AppError::Runtime(_) => 3,
        };
        std::process::exit(code);
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let (task_kind, args) = match &cli.command {
        Command::Compute(a) => ("compute", a),
        Command::Reference(a) => ("reference", a),
        Command::Estimate(a) => ("estimate", a),
        Command::Convergence(a) => ("convergence", a),
    };
    if args.grid.is_some() && task_kind != "compute" {
        return Err(AppError::Config(
            "--grid applies only to the compute subcommand".into(),
        ));
    }

    let loaded = config::load(&args.config)?;
    loaded.config.validate_task_kind(task_kind)?;

    let grid_res = if task_kind == "compute" {
        let res = match args.grid {
            Some(res) if (2..=4096).contains(&res) => Some(res),
            Some(res) => return Err(AppError::Config(format!("--grid {res} outside 2..=4096"))),
            None => loaded.config.grid_resolution()?,
        };
        if res.is_some() && args.out.is_none() {
            return Err(AppError::Config(
                "eigenfunction grid export requires --out".into(),
            ));
        }
        res
    } else {
        None
    };

    let (table, grid) = match task_kind {
        "compute" => tasks::run_compute(&loaded, grid_res)?,
        "reference" => (tasks::run_reference(&loaded)?, None),
        "estimate" => (tasks::run_estimate(&loaded)?, None),
        _ => (tasks::run_convergence(&loaded)?, None),
    };

    let rendered = match args.format {
        Format::Csv => output::to_csv(&table),
        Format::Json => output::to_json(&table),
    };
    print!("{rendered}");

    if let Some(out) = &args.out {
        std::fs::write(out, &rendered)
            .map_err(|e| AppError::Runtime(format!("cannot write {}: {e}", out.display())))?;
        if let Some(samples) = &grid {
            let grid_path = out.with_extension("grid.csv");
            let grid_csv = output::grid_to_csv(&table.meta, samples);
            std::fs::write(&grid_path, grid_csv).map_err(|e| {
                AppError::Runtime(format!("cannot write {}: {e}", grid_path.display()))
            })?;
        }
    }
    Ok(())
}
