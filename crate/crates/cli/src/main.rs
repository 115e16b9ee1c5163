mod cache;
mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, ExperimentConfig, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("computation error: {0}")]
    Compute(#[from] tracekit::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

/// Trace-function experiments over Z/mZ.
#[derive(Debug, Parser)]
#[command(name = "tracekit", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML experiment config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    length: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn run(args: Args) -> Result<bool, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(
        args.command,
        Overrides {
            p: args.p,
            length: args.length,
            seed: args.seed,
            out: args.out,
            cache: args.cache,
        },
    );
    cfg.validate()?;
    let outcome = commands::run(&cfg)?;
    let name = cfg.command().name();
    let (path, passed) = report::write(&cfg.out_dir, name, &cfg, &outcome)?;
    let verdict = match passed {
        Some(true) => "passed",
        Some(false) => "FAILED",
        None => "report-only",
    };
    println!(
        "{name}: {verdict} ({} checks) -> {}",
        outcome.checks.len(),
        path.display()
    );
    Ok(passed != Some(false))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("tracekit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
