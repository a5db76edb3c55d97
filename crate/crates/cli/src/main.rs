//! Command-line front end. One binary, one config file, a fixed task
//! vocabulary; everything a run produces lands in the output directory
//! next to a manifest describing it.
//!
//! Exit codes: 0 when every task succeeded, 2 for configuration or
//! validation problems, 3 when at least one task failed at runtime.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod config;
mod emit;
mod tasks;

#[derive(Parser)]
#[command(name = "gapdirac", version, about = "dipole spectra in a gapped Dirac plane")]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Task to run (repeatable, in order); overrides the config's list.
    #[arg(long)]
    task: Vec<String>,
    /// Seed for the randomized checks; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut cfg = match config::load_config(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("gapdirac: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    if !cli.task.is_empty() {
        if let Err(e) = config::validate_tasks(&cli.task) {
            eprintln!("gapdirac: {e}");
            return ExitCode::from(2);
        }
        cfg.tasks = cli.task;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    let manifest = match tasks::run_pipeline(&cfg) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("gapdirac: cannot write results: {e}");
            return ExitCode::from(3);
        }
    };
    for t in &manifest.tasks {
        match &t.error {
            None => eprintln!("gapdirac: {} ok ({} ms)", t.name, t.wall_ms),
            Some(msg) => eprintln!("gapdirac: {} FAILED: {msg}", t.name),
        }
    }
    if manifest.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
