//! `ergo <subcommand> --config <path> [--seed N] [--out DIR] [--set KEY=VALUE]...`
//!
//! Exit status: 0 success, 2 config error, 3 capacity error, 4 oracle
//! violation, 5 I/O error, 1 any other failure. Errors are reported on
//! stderr as one JSON object per line.

mod commands;
mod config;
mod error;
mod validate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::commands::Outputs;
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "ergo", version, about = "Exponential random graph experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat JSON config file (optional for `validate`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides one config key; VALUE is parsed as JSON, else taken as a string.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Metropolis chain and write snapshots and energy traces.
    Sample(Common),
    /// Calibrate the degree law and report degree concentration.
    Degrees(Common),
    /// Configuration-model simple fraction and erased statistics.
    Configmodel(Common),
    /// Cut profile of a graph.
    Cuts(Common),
    /// Expansion, conductance, second eigenvalues and Cheeger checks.
    Spectral(Common),
    /// Edge-failure sweep with thresholds and a G(n, m) baseline.
    Resilience(Common),
    /// Run the exact-oracle suite.
    Validate(Common),
}

fn load<C: DeserializeOwned>(common: &Common, required: bool) -> CliResult<C> {
    if required && common.config.is_none() {
        return Err(CliError::Config("missing --config".into()));
    }
    config::load(common.config.as_deref(), &common.set, common.seed, common.out.as_ref())
}

fn finish(out: Outputs, dir: &str) -> CliResult<()> {
    out.write(Path::new(dir))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sample(c) => {
            let mut cfg: config::SampleConfig = load(&c, true)?;
            finish(commands::sample(&mut cfg)?, &cfg.out)
        }
        Command::Degrees(c) => {
            let mut cfg: config::DegreesConfig = load(&c, true)?;
            finish(commands::degrees(&mut cfg)?, &cfg.out)
        }
        Command::Configmodel(c) => {
            let mut cfg: config::ConfigModelConfig = load(&c, true)?;
            finish(commands::configmodel(&mut cfg)?, &cfg.out)
        }
        Command::Cuts(c) => {
            let mut cfg: config::CutsConfig = load(&c, true)?;
            finish(commands::cuts(&mut cfg)?, &cfg.out)
        }
        Command::Spectral(c) => {
            let mut cfg: config::SpectralConfig = load(&c, true)?;
            finish(commands::spectral(&mut cfg)?, &cfg.out)
        }
        Command::Resilience(c) => {
            let mut cfg: config::ResilienceConfig = load(&c, true)?;
            finish(commands::resilience(&mut cfg)?, &cfg.out)
        }
        Command::Validate(c) => {
            let mut cfg: config::ValidateConfig = load(&c, false)?;
            let (out, passed) = validate::validate(&mut cfg)?;
            finish(out, &cfg.out)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Oracle("oracle checks failed; see validate.json".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
