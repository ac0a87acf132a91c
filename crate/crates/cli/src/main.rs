//! `giro-sim`: command-line front end for the giro engine.
//!
//! Exit codes: 0 success, 2 input parse or usage error, 3 domain error
//! (infeasible budget, ledger violation, degenerate fit), 4 data
//! validation failure.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use giro_core::policy::{ModelParams, GRID_STEP};

use error::CliError;
use output::{Format, Output};

/// Seed used for generated populations when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1629;

#[derive(Parser)]
#[command(name = "giro-sim", version, about = "Helicopter-money ledger, welfare model and Venice 1629-31 replay")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Model parameter file (`key = value` lines); defaults apply otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    params: Option<PathBuf>,
    /// Encoding of the primary output. Without it a readable report is printed.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// Destination of the primary output (stdout by default).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for generated populations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Step of the monetization grid used by searches and votes.
    #[arg(long, global = true, default_value_t = GRID_STEP)]
    grid_step: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and numeric optimal policy, plus a comparative-statics sweep.
    Optimize(commands::optimize::OptimizeArgs),
    /// Median inhabitant, individual preferences and the Condorcet check.
    Politics(commands::politics::PoliticsArgs),
    /// Replays a scenario and checks the historical balances.
    Replay(commands::ScenarioSource),
    /// Transaction log and closing balances of a scenario or a strategy list.
    Ledger(commands::ledger::LedgerArgs),
    /// Fits the agio model to observations.
    FitAgio(commands::fit_agio::FitAgioArgs),
}

pub struct Context {
    pub params: ModelParams,
    /// Whether `params` came from a file rather than the defaults.
    pub params_from_file: bool,
    pub seed: u64,
    pub grid_step: f64,
    pub output: Output,
}

fn context(global: Global) -> Result<Context, CliError> {
    let params = match &global.params {
        Some(path) => ModelParams::load(path)?,
        None => ModelParams::default(),
    };
    if !(global.grid_step > 0.0 && global.grid_step <= 1.0) {
        return Err(CliError::Input(format!(
            "--grid-step must lie in (0, 1], got {}",
            global.grid_step
        )));
    }
    Ok(Context {
        params,
        params_from_file: global.params.is_some(),
        seed: global.seed,
        grid_step: global.grid_step,
        output: Output::new(global.output, global.out),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = context(cli.global)?;
    match cli.command {
        Command::Optimize(args) => commands::optimize::run(&ctx, &args),
        Command::Politics(args) => commands::politics::run(&ctx, &args),
        Command::Replay(args) => commands::replay::run(&ctx, &args),
        Command::Ledger(args) => commands::ledger::run(&ctx, &args),
        Command::FitAgio(args) => commands::fit_agio::run(&ctx, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("giro-sim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
