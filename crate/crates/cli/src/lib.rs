//! Command-line front end: reads a scenario, runs one command and writes
//! line-delimited records followed by a summary object.
//!
//! Exit codes: 0 success, 1 property failure, 2 invalid input, 3 internal
//! error.

pub mod commands;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

pub use report::{RunReport, Status};
pub use scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Link,
    LinkScan,
    Check,
    Boost,
    Transform,
    Add,
    Accel,
    Groupoid,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Link => "link",
            Command::LinkScan => "link-scan",
            Command::Check => "check",
            Command::Boost => "boost",
            Command::Transform => "transform",
            Command::Add => "add",
            Command::Accel => "accel",
            Command::Groupoid => "groupoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "isolink", version, about = "Isometry links, boosts and observer velocities")]
pub struct Cli {
    /// Falls back to the scenario's "command" field.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON scenario; a built-in Minkowski fixture when absent.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Perturbs the link operator by a relative 1e-3 in `check`.
    #[arg(long)]
    pub inject_fault: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] isolink::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Library(e) if e.is_internal() => Status::InternalError,
            CliError::Io(_) => Status::InternalError,
            _ => Status::InvalidInput,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input(_) => "InvalidInput",
            CliError::Library(e) => e.code(),
            CliError::Io(_) => "Io",
        }
    }
}

/// Resolved run parameters: flags override scenario params, which override
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub c: f64,
    pub tol: isolink::Tolerance,
    pub inject_fault: bool,
}

impl Settings {
    pub fn resolve(cli: &Cli, scenario: &Scenario) -> Result<Self, CliError> {
        let p = &scenario.params;
        let defaults = isolink::Tolerance::default();
        let settings = Self {
            seed: cli.seed.or(p.seed).unwrap_or(0),
            samples: cli.samples.or(p.samples).unwrap_or(100),
            c: cli.c.or(p.c).unwrap_or(1.0),
            tol: isolink::Tolerance::new(
                cli.tol_rel.or(p.tol_rel).unwrap_or(defaults.rel),
                cli.tol_abs.or(p.tol_abs).unwrap_or(defaults.abs),
            ),
            inject_fault: cli.inject_fault,
        };
        if !(settings.c > 0.0 && settings.c.is_finite()) {
            return Err(isolink::Error::InvalidLightSpeed(settings.c).into());
        }
        if !(settings.tol.rel > 0.0 && settings.tol.abs > 0.0) {
            return Err(CliError::Input("tolerances must be positive".into()));
        }
        Ok(settings)
    }
}

/// Runs the command and builds its report; never panics on bad input.
pub fn execute(cli: &Cli) -> RunReport {
    let started = std::time::Instant::now();
    let scenario = match &cli.scenario {
        Some(path) => Scenario::load(path),
        None => Ok(Scenario::fixture()),
    };
    let outcome = scenario.and_then(|scenario| {
        let command = cli
            .command
            .or(scenario.command)
            .ok_or_else(|| CliError::Input("no command given".into()))?;
        let settings = Settings::resolve(cli, &scenario)?;
        Ok((command, settings, scenario))
    });
    let mut report = match outcome {
        Ok((command, settings, scenario)) => match commands::run(command, &settings, &scenario) {
            Ok(report) => report,
            Err(e) => RunReport::failed(Some(command), Some(&settings), &e),
        },
        Err(e) => RunReport::failed(cli.command, None, &e),
    };
    report.finish(started.elapsed().as_secs_f64());
    report
}

/// Executes and writes the report; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let report = execute(cli);
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    let written = match &cli.out {
        Some(path) => report.write_to_path(path, cli.format),
        None => report.write(&mut std::io::stdout().lock(), cli.format),
    };
    match written {
        Ok(()) => report.status.exit_code(),
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            Status::InternalError.exit_code()
        }
    }
}
