//! Command-line driver: builds states, runs thermal-channel evolutions and
//! sweeps, writes figure datasets as CSV, and reports thresholds.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{PresetKind, RunConfig, Settings};
pub use error::{CliError, Result};
use output::write_output;

#[derive(Debug, Parser)]
#[command(name = "photonparity", version, about = "Mean parity of photon-added states in a thermal channel")]
pub struct Cli {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub run: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dimension, populations, mean photon number, parity and W(0,0).
    State,
    /// W(0,0) against decay time, with optional cross-check backend.
    ParityEvolve,
    /// W(0,0) over (eta, decay time) for excited binomial states.
    Surface,
    /// W(q, 0) at chosen decay times.
    WignerSlice,
    /// Threshold decay times, zero crossings, regime and critical eta.
    Thresholds,
    /// Rabi trace and Fresnel reconstruction of the mean parity.
    Rabi,
}

impl Command {
    fn preset_kind(self) -> PresetKind {
        // Every single-state command accepts the cross-section presets.
        match self {
            Command::Surface => PresetKind::Surface,
            _ => PresetKind::Slice,
        }
    }
}

pub fn settings(cli: &Cli) -> Result<Settings> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    Settings::resolve(base.layered(cli.run.clone()), cli.command.preset_kind())
}

/// Output text for a command; `Err` carries the exit status. A failed
/// cross-check still produces its table before reporting the failure.
pub fn execute(command: Command, s: &Settings) -> (Option<String>, Option<CliError>) {
    let result = match command {
        Command::State => commands::cmd_state(s).map(|r| (r.render(), None)),
        Command::Thresholds => commands::cmd_thresholds(s).map(|r| (r.render(), None)),
        Command::ParityEvolve => {
            commands::cmd_parity_evolve(s).and_then(|o| Ok((o.table.to_csv_string()?, o.failure)))
        }
        Command::Surface => commands::cmd_surface(s).and_then(|t| Ok((t.to_csv_string()?, None))),
        Command::WignerSlice => commands::cmd_wigner_slice(s).and_then(|t| Ok((t.to_csv_string()?, None))),
        Command::Rabi => commands::cmd_rabi(s).and_then(|t| Ok((t.to_csv_string()?, None))),
    };
    match result {
        Ok((text, failure)) => (Some(text), failure),
        Err(e) => (None, Some(e)),
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let s = match settings(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let (text, failure) = execute(cli.command, &s);
    if let Some(text) = text {
        if let Err(e) = write_output(s.raw.out.as_deref(), &text) {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
    match failure {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
