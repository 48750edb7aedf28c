//! Driver for the linearizability pipeline of planar 3-webs.
//!
//! A web is given implicitly as `{x = c, y = c, f(x, y) = c}`. The driver
//! evaluates the curvature, builds or loads the obstruction tower, decides
//! whether the obstructions share a zero in the base variable `s`, and for
//! every real common zero integrates and verifies a linearization on a grid.
//!
//! Exit statuses: `0` decisive, `2` inconclusive, `3` input error, `4` tower
//! failure, `5` integration failure.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{parse_point, parse_rational, FieldArgs, FileConfig, JobArgs, JobConfig};
pub use error::{CliError, EXIT_DECISIVE, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_INTEGRATION, EXIT_TOWER};
pub use pipeline::{cmd_analyze, cmd_curvature, cmd_integrate, cmd_tower, Outcome};
pub use report::{Report, Verdict, CLASS_BOUND, REPORT_SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "weblin", version, about = "Decide and construct linearizations of planar 3-webs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curvature at the point and whether the web is parallelizable.
    Curvature(JobArgs),
    /// Full pipeline: obstructions, admissible bases, linearizations, verdict.
    Analyze(JobArgs),
    /// Build or validate the cached obstruction tower.
    Tower(TowerArgs),
    /// Integrate one linearization from a given base.
    Integrate {
        #[command(flatten)]
        job: JobArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Integrate one linearization and check its residuals.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(clap::Args, Debug, Default)]
pub struct TowerArgs {
    /// Rebuild even if the cache is valid.
    #[arg(long)]
    pub rebuild: bool,
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long = "report-out")]
    pub report_out: Option<PathBuf>,
    /// TOML file; only `cache_dir` is read.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn write_report(outcome: &Outcome, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = outcome.report.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            if let Some(v) = outcome.report.verdict {
                println!("verdict: {}", serde_json::to_value(v).expect("verdict").as_str().unwrap_or_default());
            }
        }
        None => print!("{text}"),
    }
    if let Some(e) = &outcome.report.error {
        eprintln!("weblin: {} error: {}", e.stage, e.message);
    }
    Ok(())
}

fn outcome_or_input_error(
    command: &'static str,
    cfg: Result<JobConfig, CliError>,
    run: impl FnOnce(&JobConfig) -> Outcome,
) -> Outcome {
    match cfg {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let mut report = Report::new(command);
            report.error =
                Some(report::ErrorStanza { stage: e.stage(), message: e.to_string(), exit_code: e.exit_code() });
            Outcome { report, exit_code: e.exit_code() }
        }
    }
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: Cli) -> i32 {
    let (outcome, out) = match cli.command {
        Command::Curvature(job) => (
            outcome_or_input_error("curvature", JobConfig::resolve(&job, &FieldArgs::default()), cmd_curvature),
            job.report_out,
        ),
        Command::Analyze(job) => (
            outcome_or_input_error("analyze", JobConfig::resolve(&job, &FieldArgs::default()), cmd_analyze),
            job.report_out,
        ),
        Command::Integrate { job, field } => {
            let cfg = JobConfig::resolve(&job, &field);
            let dump = field.dump_out.clone();
            (outcome_or_input_error("integrate", cfg, |c| cmd_integrate(c, false, dump.as_deref())), job.report_out)
        }
        Command::Verify { job, field } => {
            let cfg = JobConfig::resolve(&job, &field);
            let dump = field.dump_out.clone();
            (outcome_or_input_error("verify", cfg, |c| cmd_integrate(c, true, dump.as_deref())), job.report_out)
        }
        Command::Tower(args) => {
            let dir = match (&args.cache_dir, &args.config) {
                (Some(d), _) => Ok(d.clone()),
                (None, Some(path)) => {
                    FileConfig::load(path).map(|f| f.cache_dir.unwrap_or_else(obstruction::default_cache_dir))
                }
                (None, None) => Ok(obstruction::default_cache_dir()),
            };
            let outcome = match dir {
                Ok(dir) => cmd_tower(&dir, args.rebuild),
                Err(e) => outcome_or_input_error("tower", Err(e), |_| unreachable!()),
            };
            (outcome, args.report_out)
        }
    };
    match write_report(&outcome, out.as_ref()) {
        Ok(()) => outcome.exit_code,
        Err(e) => {
            eprintln!("weblin: {e}");
            e.exit_code()
        }
    }
}
