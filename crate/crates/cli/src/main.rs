//! Batch CLI for the cross-lingual feature-transfer pipeline.
//!
//! Subcommands: extract, train, evaluate, ablate, synth. Runs are driven by
//! a TOML config (`--config`); `--seed`, `--mode`, and `--jobs` override
//! their config counterparts. Exit codes: 0 success, 1 validation failure,
//! 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{Mode, RunConfig};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<lexbridge::Error> for CliError {
    fn from(e: lexbridge::Error) -> Self {
        use lexbridge::Error as E;
        match e {
            E::Numeric(_) | E::DegenerateRanking(_) => CliError::runtime(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "lexbridge",
    about = "Learn a cross-lingual feature correspondence and score narrations for dementia",
    version
)]
struct Cli {
    /// Path to the TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override [train].seed
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the worker thread count
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Override [train].mode
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Override [io].out_dir
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract feature matrices from narration or parallel JSONL
    Extract,
    /// Train the correspondence model and assemble the pipeline
    Train,
    /// Evaluate baselines and the pipeline against severity ground truth
    Evaluate,
    /// Rerun training end-to-end over a grid of parallel sample sizes
    Ablate,
    /// Materialize a synthetic benchmark on disk
    Synth,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| CliError::validation(e.to_string()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.train.seed = seed;
    }
    if let Some(mode) = cli.mode {
        config.train.mode = mode;
    }
    if let Some(dir) = &cli.out_dir {
        config.io.out_dir = Some(dir.clone());
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::validation("--jobs must be >= 1"));
        }
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match cli.command {
        Command::Extract => commands::extract::run(&config),
        Command::Train => commands::train::run(&config),
        Command::Evaluate => commands::evaluate::run(&config),
        Command::Ablate => commands::ablate::run(&config),
        Command::Synth => commands::synth::run(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
