//! `expanse`: configuration-driven runs of the expansion toolkit.
//!
//! Exit codes: 0 pass or completed, 1 theorem check failed, 2 configuration
//! error, 3 estimator precondition failed.

mod batch;
mod config;
mod error;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{parse_config, plan, read_config};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "expanse", version, about = "Expansion exponents, capacity and entropy on finite models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its reports.
    Run {
        config: PathBuf,
        /// Directory for reports (default: the config's output.dir, else the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a list of configs and write a summary CSV.
    Batch {
        configs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("EXPANSE_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("EXPANSE_THREADS={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn load(path: &Path, seed: Option<u64>) -> Result<config::Plan, CliError> {
    let value = read_config(path)?;
    let config = parse_config(path, value)?;
    plan(path, config, seed)
}

fn run_one(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<i32, CliError> {
    let plan = load(path, seed)?;
    let outcome = run::execute(&plan)?;
    let dir = out
        .or_else(|| {
            plan.config.output.dir.as_ref().map(|d| {
                if d.is_absolute() {
                    d.clone()
                } else {
                    path.parent().unwrap_or(Path::new(".")).join(d)
                }
            })
        })
        .unwrap_or_else(|| PathBuf::from("."));
    let written = outcome
        .write(&dir)
        .map_err(|e| CliError::config(path, "output", format!("cannot write reports to {}: {e}", dir.display())))?;
    let mut line = format!("{} {}", outcome.name, outcome.operation.as_str());
    if let Some(e) = outcome.estimate {
        line.push_str(&format!(" estimate={e}"));
    }
    if let Some(m) = outcome.margin {
        line.push_str(&format!(" margin={}", expanse_core::io::format_f64(m)));
    }
    if let Some(v) = outcome.verdict {
        line.push_str(&format!(" verdict={}", serde_json::to_value(v).unwrap().as_str().unwrap()));
    }
    println!("{line}");
    for p in written {
        println!("  wrote {}", p.display());
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("expanse: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Run { config, out, seed } => run_one(&config, out, seed),
        Command::Batch { configs, out } => batch::run_batch(&configs, out.as_deref()).map(|r| {
            println!("wrote {}", r.summary_path.display());
            r.exit_code
        }),
        Command::Validate { config } => load(&config, None).map(|plan| {
            println!("{}: ok ({} {}, {} points)", config.display(), plan.name, plan.config.operation.as_str(), plan.cloud.len());
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("expanse: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
