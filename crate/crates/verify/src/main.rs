use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use dunkl_verify::checks::{coverage, REQUIRED_EQUATIONS};
use dunkl_verify::config::{RootSystemSpec, SuiteConfig};
use dunkl_verify::report::{run_suite, Report};

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact randomized checks for Dunkl-operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and print a JSON report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Restricts to these suites; repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Writes the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the equation -> check map and flag equations with no check.
    Coverage,
    /// Run only the exact-vs-Monte-Carlo cross-checks.
    Oracle {
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        cases: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(report: &Report, output: Option<PathBuf>) -> Result<ExitCode> {
    let json = report.to_json()?;
    match output {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => writeln!(std::io::stdout(), "{json}")?,
    }
    let s = &report.summary;
    eprintln!("{} passed, {} failed, {} skipped", s.pass, s.fail, s.skipped);
    for c in report.checks.iter().filter(|c| c.status == dunkl_verify::checks::Status::Fail) {
        eprintln!("FAIL {} [{}]: {}", c.check_id, c.config, c.reason.as_deref().unwrap_or("counterexample found"));
    }
    Ok(if report.failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, seed, suites, output } => {
            let mut cfg = SuiteConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if !suites.is_empty() {
                cfg.suites = suites;
            }
            emit(&run_suite(&cfg)?, output)
        }
        Command::Coverage => {
            let mut missing = 0;
            for (eq, ids) in coverage() {
                if ids.is_empty() {
                    missing += 1;
                    println!("{eq:>10}  UNMAPPED");
                } else {
                    println!("{eq:>10}  {}", ids.join(", "));
                }
            }
            println!("{} required equations, {missing} unmapped", REQUIRED_EQUATIONS.len());
            Ok(if missing > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Oracle { samples, seed, cases, output } => {
            let mut cfg = SuiteConfig::from_toml("[root_system]\nkind = \"trivial\"\ndim = 2\n")?;
            cfg.root_systems = vec![RootSystemSpec::Trivial { dim: 2 }];
            cfg.mc_samples = samples;
            cfg.seed = seed;
            cfg.oracle_cases = cases;
            cfg.suites = vec!["oracle".into()];
            emit(&run_suite(&cfg)?, output)
        }
    }
}
