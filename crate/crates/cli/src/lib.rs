//! Command-line front end: TOML run configs in, CSV or JSON tables out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use extinction_discount::simulation::SimulationConfig;

use crate::commands::Outcome;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::write_atomic;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EXDISC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "exdisc", version, about = "Discounting under mortality and extinction risk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = "exdisc-out")]
    pub out: PathBuf,
    /// Base seed for Monte Carlo runs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo replications.
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    /// Absolute tolerance for truncated series.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Exit with status 2 if any result is divergent.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Analytic value of each case at each grid point.
    Eval,
    /// Monte Carlo (or agent-based) estimates next to the analytic values.
    Simulate,
    /// Discount factors, finiteness checks and values.
    Sweep,
    /// Ratios of consecutive series weights over time.
    Profile,
    /// Derivatives of the discount factors in M and m.
    Sensitivity,
    /// Summary table of discount factors over a default grid.
    Table1,
    /// Analytic-versus-Monte-Carlo oracle grid with a reproducibility check.
    Verify,
}

/// What a finished run wrote and printed.
pub struct RunReport {
    pub written: Vec<PathBuf>,
    pub lines: Vec<String>,
}

fn overridden(cli: &Cli) -> Result<(RunConfig, String), CliError> {
    let (mut cfg, origin) = match &cli.config {
        Some(path) => (RunConfig::load(path)?, path.display().to_string()),
        None => (RunConfig::default(), "<defaults>".to_string()),
    };
    if let Some(tol) = cli.tolerance {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config {
                location: "--tolerance".into(),
                message: format!("must be positive, got {tol}"),
            });
        }
        cfg.tolerance = tol;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    Ok((cfg, origin))
}

fn simulation_config(cli: &Cli, cfg: &RunConfig) -> Result<SimulationConfig, CliError> {
    let mut sim = cfg.simulation.clone().unwrap_or_default();
    if let Some(seed) = cli.seed {
        sim.seed = seed;
    }
    if let Some(reps) = cli.reps {
        sim.replications = reps;
    }
    if sim.replications == 0 {
        return Err(CliError::Config { location: "--reps".into(), message: "must be >= 1".into() });
    }
    Ok(sim)
}

/// Runs one command and writes its outputs. Outputs are written before a
/// `--strict` divergence or a failed oracle budget is reported.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let (cfg, origin) = overridden(cli)?;
    let grid = || cfg.points(&origin);
    let mut failure = None;
    let outcome = match cli.command {
        Command::Eval => commands::eval(&cfg, &grid()?),
        Command::Sweep => commands::sweep(&cfg, &grid()?),
        Command::Profile => commands::profile(&cfg, &grid()?),
        Command::Sensitivity => commands::sensitivity(&cfg, &grid()?),
        Command::Simulate => commands::simulate(&cfg, &grid()?, &simulation_config(cli, &cfg)?),
        Command::Table1 => {
            let points = if cfg.grid.is_some() { grid()? } else { presets::table1_grid() };
            commands::table1(&points)?
        }
        Command::Verify => {
            let seed = cli.seed.unwrap_or(0);
            let reps = cli.reps.unwrap_or(verify::DEFAULT_REPLICATIONS);
            let report = verify::run(seed, reps)?;
            verify::self_check(&report, seed, reps)?;
            let mut lines = report.lines.clone();
            lines.push(format!(
                "{} of {} comparisons outside 3 SE (budget {})",
                report.failures,
                report.rows.len(),
                verify::FAILURE_BUDGET
            ));
            if report.failures > verify::FAILURE_BUDGET {
                failure = Some(CliError::OracleBudget {
                    failures: report.failures,
                    budget: verify::FAILURE_BUDGET,
                });
            }
            Outcome { artifacts: vec![verify::artifact(&report)], divergent: 0, messages: lines }
        }
    };

    let mut written = Vec::new();
    for artifact in &outcome.artifacts {
        let name = artifact.file_name(cfg.format);
        written.push(write_atomic(&cli.out, &name, &artifact.bytes(cfg.format))?);
    }
    let mut lines = outcome.messages;
    if outcome.divergent > 0 {
        lines.push(format!("{} divergent result(s) flagged", outcome.divergent));
        if cli.strict && failure.is_none() {
            failure = Some(CliError::Divergent(outcome.divergent));
        }
    }
    match failure {
        Some(e) => {
            for line in &lines {
                println!("{line}");
            }
            Err(e)
        }
        None => Ok(RunReport { written, lines }),
    }
}
