use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cmc_cli::{CliError, Command, Runner, ScenarioConfig};

#[derive(Parser)]
#[command(name = "cmc", version, about = "CMC surfaces in AdS3 spanning a quasi-circle")]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// Scenario configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Solve a single leaf.
    Solve,
    /// Solve every H in the grid by continuation and check monotonicity.
    Sweep,
    /// Run the invariant suite and write a pass/fail report.
    Validate,
    /// Write the full data bundle (leaves, foliation, boundary samples).
    Export,
}

fn run(args: &Args) -> Result<u8, CliError> {
    let path = args.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    let config = ScenarioConfig::load(path)?;
    let out = args.out.clone().unwrap_or_else(|| config.output_dir.clone());
    let cmd = match args.command {
        Sub::Solve => Command::Solve,
        Sub::Sweep => Command::Sweep,
        Sub::Validate => Command::Validate,
        Sub::Export => Command::Export,
    };
    let outcome = Runner { quiet: args.quiet }.run(cmd, config, &out)?;
    if cmd == Command::Validate {
        let report = serde_json::to_string_pretty(&outcome.manifest.invariants).map_err(|e| CliError::Pipeline(e.to_string()))?;
        println!("{report}");
    }
    if let Some(msg) = &outcome.message {
        eprintln!("cmc: {msg}");
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cmc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
