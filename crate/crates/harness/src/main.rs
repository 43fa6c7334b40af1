use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use laea_harness::fixtures::{validate_dir, FixtureStatus};
use laea_harness::{rebuild_tables, run_experiment, ExperimentConfig, RunOptions};

#[derive(Parser)]
#[command(name = "laea", version, about = "Run surrogate-assisted optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Cells run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild summary tables of a results directory.
    Table { dir: PathBuf },
    /// Check rendered prompts against golden files.
    ValidatePrompts {
        dir: PathBuf,
        /// Rewrite the golden files from the current renderer.
        #[arg(long)]
        bless: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { config, jobs, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_experiment(&cfg, &RunOptions { jobs, out })?;
            for (arm, t) in &report.output.failures {
                if t.fallbacks > 0 || t.incomplete_runs > 0 {
                    log::warn!("{arm}: {} fallback answers, {} incomplete runs", t.fallbacks, t.incomplete_runs);
                }
            }
            println!("{}", report.out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { dir } => {
            let output = rebuild_tables(&dir)?;
            if let Some(table) = output.table {
                table.write_csv(std::io::stdout().lock())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidatePrompts { dir, bless } => {
            let mut ok = true;
            for r in validate_dir(&dir, bless)? {
                let status = match r.status {
                    FixtureStatus::Match => "ok".to_string(),
                    FixtureStatus::Blessed => "blessed".to_string(),
                    FixtureStatus::Missing => {
                        ok = false;
                        "missing golden file".to_string()
                    }
                    FixtureStatus::Mismatch => {
                        ok = false;
                        format!("differs from line {}", r.first_difference.unwrap_or(1))
                    }
                };
                println!("{}: {status}", r.name);
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
