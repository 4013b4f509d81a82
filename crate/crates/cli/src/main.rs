//! `splitmev`: trade-split optimizer, sequencer simulator and revert analysis.

mod analyze;
mod error;
mod optimize;
mod output;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, Result};
use crate::output::OutDir;

#[derive(Parser)]
#[command(name = "splitmev", version, about)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "SPLITMEV_OUT")]
    out: Option<PathBuf>,
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal number of equal swaps for one arbitrage instance.
    Optimize {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a scenario file, or every scenario in a directory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Replace the seed of every scenario.
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Classify reverted transactions and compute fee statistics.
    Analyze {
        /// Directory of `.json` trace documents and `.jsonl` trace streams.
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        records: PathBuf,
        /// Rows per breakdown table.
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Reverts needed before an unlabelled contract counts as a bot.
        #[arg(long, default_value_t = 10)]
        min_bot_reverts: u64,
    },
}

fn run(cli: Cli) -> Result<()> {
    let out = cli
        .out
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set SPLITMEV_OUT".into()))?;
    let out = OutDir::create(&out)?;
    match cli.command {
        Command::Optimize { config } => optimize::run(&config, &out),
        Command::Simulate { config, seed_override } => simulate::run(&config, &out, seed_override),
        Command::Analyze {
            traces,
            labels,
            records,
            top_k,
            min_bot_reverts,
        } => analyze::run(
            &analyze::AnalyzeArgs {
                traces: &traces,
                labels: &labels,
                records: &records,
                top_k,
                min_bot_reverts,
            },
            &out,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.quiet {
            log::LevelFilter::Error
        } else {
            log::LevelFilter::Info
        })
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
