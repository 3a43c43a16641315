//! Command-line runner for qbsc experiments.
//!
//! Exit status is 0 on success, 1 when the config or arguments are invalid and
//! 2 when a run fails.

mod config;
mod experiment;
mod result;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::config::Diagnostic;
use crate::result::{plot_csv, ExperimentResult};

#[derive(Parser)]
#[command(name = "qbsc", version, about = "Run comparator and Grover-search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its JSON result.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Result file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config shot count.
        #[arg(long)]
        shots: Option<usize>,
    },
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Export a result's distribution as `outcome,probability` CSV.
    Plot {
        #[arg(long)]
        result: PathBuf,
        /// CSV file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(Vec<Diagnostic>),
    Runtime(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Invalid(diags) => {
                for d in diags {
                    eprintln!("error: {d}");
                }
                ExitCode::from(1)
            }
            Failure::Runtime(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    shots: Option<usize>,
) -> Result<(), Failure> {
    let mut cfg = config::load(config).map_err(Failure::Invalid)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(shots) = shots {
        if shots == 0 {
            return Err(Failure::Invalid(vec![Diagnostic {
                field: "shots".into(),
                message: "must be positive".into(),
            }]));
        }
        cfg.shots = Some(shots);
    }
    let start = Instant::now();
    let mut result = experiment::run(&cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
    result.timing.wall_seconds = start.elapsed().as_secs_f64();
    let mut text = serde_json::to_string_pretty(&result)
        .map_err(|e| Failure::Runtime(format!("cannot encode result: {e}")))?;
    text.push('\n');
    write_output(out, &text)
}

fn plot(result: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(result)
        .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", result.display())))?;
    let parsed: ExperimentResult = serde_json::from_str(&text)
        .map_err(|e| Failure::Runtime(format!("{} is not a result file: {e}", result.display())))?;
    let csv = plot_csv(&parsed).map_err(Failure::Runtime)?;
    write_output(out, &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            config,
            out,
            seed,
            shots,
        } => run(config, out.as_deref(), *seed, *shots),
        Command::Validate { config } => config::load(config).map(|cfg| {
            println!("ok: {} experiment", cfg.kind.name());
        }).map_err(Failure::Invalid),
        Command::Plot { result, out } => plot(result, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
