//! Scenario runner for the elderly-inculcation model.

mod commands;
mod config;
mod error;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::Table;

#[derive(Debug, Parser)]
#[command(
    name = "eldershare",
    version,
    about = "Gifts, inculcation and the relative consumption of the elderly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML scenario file; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for the randomized checks of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equilibrium of the model selected by `model` in the config.
    SteadyState,
    /// Perfect-foresight transition path of the accumulation economy.
    Simulate,
    /// Relative income and consumption over property-rights levels.
    SweepPhi,
    /// Steady-state consumption ratio over capital intensity.
    SweepCapitalIntensity,
    /// Per-society index scores from a trait table.
    Indices,
    /// Pairwise index correlations with 95% significance flags.
    Correlate,
    /// Residual checks of closed forms against the brute-force oracle.
    Verify,
}

fn emit(table: &Table, cli: &Cli) -> Result<(), CliError> {
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        match cli.format {
            Format::Csv => output::write_csv(table, w),
            Format::Json => output::write_json(table, w),
        }
    };
    match &cli.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = ScenarioConfig::load(cli.config.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("--jobs {}: {e}", cli.jobs)))?;
    pool.install(|| {
        let table = match cli.command {
            Command::SteadyState => commands::steady(&cfg)?,
            Command::Simulate => commands::simulate(&cfg)?,
            Command::SweepPhi => commands::sweep_phi(&cfg)?,
            Command::SweepCapitalIntensity => commands::sweep_capital_intensity(&cfg)?,
            Command::Indices => commands::indices(&cfg)?,
            Command::Correlate => commands::correlate(&cfg)?,
            Command::Verify => {
                let (table, failed) = commands::verify(&cfg, cli.seed)?;
                emit(&table, cli)?;
                return if failed == 0 {
                    Ok(())
                } else {
                    Err(CliError::Verification(failed))
                };
            }
        };
        emit(&table, cli)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
