use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod commands;
mod settings;

use settings::{RunConfig, Settings};

/// Conflict-of-interest aware citation ranking.
#[derive(Parser)]
#[command(name = "coirank", version, about)]
struct Cli {
    /// Flat TOML file whose keys match the long flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and report what was admitted.
    Ingest,
    /// Classify every citation and write the weighted edge list.
    Classify,
    /// Rank papers with one algorithm (--algo).
    Rank,
    /// Roll scores up to scholars, institutions and countries.
    Aggregate,
    /// Compare all algorithms against the COI-free ground truth.
    Eval,
    /// Run every stage and write all artifacts.
    Pipeline,
    /// Write a synthetic corpus as JSON Lines.
    Fixture {
        /// Emit the bundled four-case example instead of a generated corpus.
        #[arg(long)]
        four_cases: bool,
        /// Output file (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Classify => "classify",
            Command::Rank => "rank",
            Command::Aggregate => "aggregate",
            Command::Eval => "eval",
            Command::Pipeline => "pipeline",
            Command::Fixture { .. } => "fixture",
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let settings = match &cli.config {
        Some(path) => cli.settings.over(Settings::from_file(path)?)?,
        None => cli.settings,
    };
    let cfg = RunConfig::resolve(settings)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let report = match &cli.command {
        Command::Fixture { four_cases, output } => {
            commands::fixture_cmd(&cfg, *four_cases, output.as_deref())?;
            return Ok(true);
        }
        Command::Ingest => commands::ingest_cmd(&cfg)?,
        Command::Classify => commands::classify_cmd(&cfg)?,
        Command::Rank => commands::rank_cmd(&cfg)?,
        Command::Aggregate => commands::aggregate_cmd(&cfg)?,
        Command::Eval => commands::eval_cmd(&cfg)?,
        Command::Pipeline => commands::pipeline_cmd(&cfg)?,
    };
    commands::write_manifest(&cfg, cli.command.name(), &report)?;
    for run in report.runs.iter().filter(|r| !r.converged) {
        log::error!(
            "{} did not converge: last change {:e} after {} iterations",
            run.algorithm,
            run.last_delta,
            run.iterations
        );
    }
    Ok(report.converged())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
