//! The `equilib` command line.
//!
//! Exit status is 0 on success, 2 for an invalid invocation or config and 3
//! for a numerical failure or a violated hypothesis. Reports go to standard
//! output; diagnostics go to standard error.

pub mod config;
pub mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{cross_check, CatalogError, CrossCheck};
use crate::draws::{GFamily, WeightFamily};
use crate::equilibrium::solve_equilibrium;
use crate::functional::{verify_theorem, FunctionalError};
use crate::sweep::run_sweep;
use crate::thermo::{equilibrate, staged_equilibrate, ThermoError};

pub use config::{ConfigError, Format, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

pub const DEFAULT_SWEEP_COUNT: u64 = 100;

#[derive(Debug, Parser)]
#[command(
    name = "equilib",
    version,
    about = "Equilibrium points of weighted integral balances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Monotone function `g`, overriding the config.
    #[arg(long, global = true)]
    pub g: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Sweep seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sweep instance count, overriding the config.
    #[arg(long, global = true)]
    pub count: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the equilibrium point of the configured system.
    Solve,
    /// Evaluate the weighted functional for `g` and check its sign.
    Verify,
    /// Evaluate a named inequality and confirm it with the generic engine.
    Catalog { name: CatalogName },
    /// Bring the configured bodies into thermal contact.
    Simulate,
    /// Check the sign law on seeded random systems.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CatalogName {
    Amgm,
    Power,
    Jensen,
    Shifted,
    Logx,
}

impl CatalogName {
    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::Amgm => "amgm",
            CatalogName::Power => "power",
            CatalogName::Jensen => "jensen",
            CatalogName::Shifted => "shifted",
            CatalogName::Logx => "logx",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(ConfigError),
    /// Numerical failure or violated hypothesis.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_VALIDATION,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Numeric(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

/// A rendered report. `failure` is set when the computation finished but its
/// conclusion did not hold; the report is still printed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

#[derive(Serialize)]
struct CatalogOutput<'a> {
    entry: &'a str,
    checks: Vec<CrossCheck>,
}

fn catalog_error(e: CatalogError) -> CliError {
    match e {
        CatalogError::Mean(_)
        | CatalogError::OrderNotIncreasing { .. }
        | CatalogError::NonPositiveParameter { .. }
        | CatalogError::DerivativeMismatch { .. }
        | CatalogError::System(_) => CliError::Config(ConfigError::new("catalog", e.to_string())),
        CatalogError::Functional(FunctionalError::Eval(_)) | CatalogError::Eval(_) => {
            CliError::Config(ConfigError::new("catalog", e.to_string()))
        }
        _ => numeric(e),
    }
}

fn thermo_error(e: ThermoError) -> CliError {
    match e {
        ThermoError::Equilibrium(_) | ThermoError::Quadrature(_) => numeric(e),
        ThermoError::EmptySchedule
        | ThermoError::EmptyStage { .. }
        | ThermoError::UnknownLabel { .. } => {
            CliError::Config(ConfigError::new("schedule", e.to_string()))
        }
        ThermoError::FinalStageIncomplete { .. } => {
            CliError::Config(ConfigError::new("schedule", e.to_string()))
        }
        _ => CliError::Config(ConfigError::new("bodies", e.to_string())),
    }
}

fn load(cli: &Cli, required: bool) -> Result<RunConfig, CliError> {
    match &cli.config {
        Some(path) => Ok(RunConfig::load(path)?),
        None if required => {
            Err(ConfigError::new("--config", "a config file is required for this command").into())
        }
        None => Ok(RunConfig::default()),
    }
}

/// Runs one command.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let config = load(cli, !matches!(cli.command, Command::Sweep))?;
    let format = cli.format.or(config.format).unwrap_or(Format::Human);
    let tols = &config.tolerances;
    let ok = |command: &str, result: &dyn erased::Report| Output {
        text: result.render(command, format),
        failure: None,
    };
    match &cli.command {
        Command::Solve => {
            let system = config.system("solve")?;
            let result = solve_equilibrium(&system, tols).map_err(numeric)?;
            Ok(ok("solve", &result))
        }
        Command::Verify => {
            let system = config.system("verify")?;
            let g = config.g(cli.g.as_deref(), "verify")?;
            let g_path = if cli.g.is_some() { "--g" } else { "g" };
            let verdict = verify_theorem(&system, &g, tols).map_err(|e| match e {
                FunctionalError::Eval(_) => {
                    CliError::Config(ConfigError::new(g_path, e.to_string()))
                }
                other => numeric(other),
            })?;
            let mut out = ok("verify", &verdict);
            if !verdict.holds {
                out.failure = Some(format!(
                    "S(g) = {} is not {} 0 within {}",
                    verdict.value,
                    verdict.expected_sign.symbol(),
                    verdict.error_bound
                ));
            }
            Ok(out)
        }
        Command::Catalog { name } => {
            let entry = config.inequality(name.as_str())?;
            let checks = cross_check(&entry, tols).map_err(catalog_error)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.agrees)
                .map(|c| c.report.name.as_str())
                .collect();
            let failure =
                (!failed.is_empty()).then(|| format!("not confirmed: {}", failed.join(", ")));
            let report = CatalogOutput {
                entry: name.as_str(),
                checks: checks.clone(),
            };
            Ok(Output {
                text: report::render("catalog", &report, format),
                failure,
            })
        }
        Command::Simulate => {
            let bodies = config.bodies("simulate")?;
            let result = match &config.schedule {
                Some(schedule) => staged_equilibrate(&bodies, schedule, tols),
                None => equilibrate(&bodies, tols),
            }
            .map_err(thermo_error)?;
            Ok(ok("simulate", &result))
        }
        Command::Sweep => {
            let seed = cli.seed.or(config.seed).unwrap_or(0);
            let count = cli.count.or(config.count).unwrap_or(DEFAULT_SWEEP_COUNT);
            let family = config.family.unwrap_or(GFamily::Decreasing);
            let weights = config.weight_family.unwrap_or(WeightFamily::Powers);
            let summary = run_sweep(seed, count, family, weights, tols);
            let mut out = ok("sweep", &summary);
            if summary.failures > 0 {
                out.failure = Some(format!(
                    "{} of {} instances failed",
                    summary.failures, summary.count
                ));
            }
            Ok(out)
        }
    }
}

mod erased {
    use super::{report, Format};

    /// Object-safe view of a serializable result.
    pub trait Report {
        fn render(&self, command: &str, format: Format) -> String;
    }

    impl<T: serde::Serialize> Report for T {
        fn render(&self, command: &str, format: Format) -> String {
            report::render(command, self, format)
        }
    }
}

/// Parses `std::env::args`, runs the command and reports the outcome.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            match out.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(EXIT_NUMERIC)
                }
                None => ExitCode::from(EXIT_OK),
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
