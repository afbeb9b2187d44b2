use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mfjump::commands::{cmd_diagnose, cmd_simulate, cmd_spectrum, cmd_tangent, CmdError};
use mfjump::config::ExperimentConfig;

/// Deterministic jump-process experiments.
#[derive(Parser)]
#[command(name = "mfjump", version, about)]
struct Cli {
    /// Configuration file (key = value with [section] headers);
    /// defaults are used when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the output directory
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the driving events and integrate the path
    Simulate,
    /// Emit theory and coarse-grained spectrum curves plus an SVG figure
    Spectrum,
    /// Regularity field, redundancy table, covering fractions
    Diagnose,
    /// Rescaled-increment KS report against the stable reference
    Tangent,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CmdError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CmdError::Io { path: path.clone(), source })?;
            ExperimentConfig::parse(&text).map_err(|e| CmdError::Validation(e.to_string()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn run() -> Result<(), CmdError> {
    let cli = Cli::parse();
    let cfg = load_config(&cli)?;
    let written = match cli.command {
        Command::Simulate => cmd_simulate(&cfg)?,
        Command::Spectrum => cmd_spectrum(&cfg)?,
        Command::Diagnose => cmd_diagnose(&cfg)?,
        Command::Tangent => cmd_tangent(&cfg)?,
    };
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
