use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use deltashock::presets::preset;
use deltashock_cli::commands::{self, Outcome};
use deltashock_cli::scenario::Scenario;

/// Exact Riemann solutions with delta shocks, and checks against them.
#[derive(Parser)]
#[command(name = "deltashock", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a Riemann problem and print waves, atoms and a sampled profile.
    Solve(Common),
    /// Check the exact solution: mass balance, weak form, entropy.
    Verify(Common),
    /// Run the finite-volume scheme and compare spike growth rates.
    Fvm(Common),
    /// Write plotting tables for the exact profile.
    Figure(Common),
    /// List the built-in scenarios and constants.
    Presets {
        /// Also write every preset as a scenario file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Built-in scenario name, see `deltashock presets`.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluation time (final time for `fvm`).
    #[arg(long)]
    time: Option<f64>,
    /// Grid size for `fvm`, replacing the scenario's list.
    #[arg(long)]
    cells: Option<usize>,
    /// Tolerance override: weak residual for `verify`, rate error for `fvm`.
    #[arg(long)]
    tol: Option<f64>,
}

impl Common {
    fn scenario(&self) -> Result<Scenario> {
        match (&self.scenario, &self.preset) {
            (Some(path), _) => Scenario::load(path),
            (None, Some(name)) => match preset(name) {
                Some(p) => Ok(Scenario::from_preset(p)),
                None => bail!("unknown preset `{name}`"),
            },
            (None, None) => bail!("give --scenario <path> or --preset <name>"),
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Solve(c) => commands::solve(&c.scenario()?, c.time, c.out.as_deref()),
        Command::Verify(c) => commands::verify(&c.scenario()?, c.tol, c.out.as_deref()),
        Command::Fvm(c) => commands::fvm(&c.scenario()?, c.cells, c.time, c.tol, c.out.as_deref()),
        Command::Figure(c) => {
            let out = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
            commands::figure(&c.scenario()?, c.time, &out)
        }
        Command::Presets { out } => commands::list_presets(out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
