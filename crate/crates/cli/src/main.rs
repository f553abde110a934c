use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use qtwist_core::matspan::Tolerance;
use qtwist_core::report::Report;
use qtwist_core::spec::{resolve, verify};
use qtwist_core::suite::{self, SuiteConfig, DEFAULT_MAX_ORDER, DEFAULT_SEED};

mod emit;
mod examples;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qtwist",
    version,
    about = "Twisted tensor products over finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full check battery on a construction spec.
    Verify {
        spec: PathBuf,
        /// Overrides the spec's eps_eq.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Run a named scenario and print its report.
    Example {
        #[command(subcommand)]
        preset: examples::Preset,
        #[arg(long, value_enum, default_value = "json", global = true)]
        emit: Emit,
    },
    /// Run the randomized suite and every fixed scenario.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Largest group order enumerated.
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        /// Where the smallest failing spec is written.
        #[arg(long, default_value = "qtwist-reproducer.json")]
        reproducer: PathBuf,
    },
}

fn print_reports(reports: &[Report], emit: Emit) -> anyhow::Result<()> {
    match emit {
        Emit::Json => {
            let text = match reports {
                [one] => serde_json::to_string_pretty(one)?,
                many => serde_json::to_string_pretty(many)?,
            };
            writeln!(std::io::stdout().lock(), "{text}")?;
        }
        Emit::Csv => emit::write_csv(reports, std::io::stdout().lock())?,
    }
    Ok(())
}

fn status(pass: bool) -> u8 {
    if pass {
        PASS
    } else {
        FAIL
    }
}

fn cmd_verify(path: &PathBuf, tolerance: Option<f64>, emit: Emit) -> anyhow::Result<u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qtwist: cannot read {}: {e}", path.display());
            return Ok(USAGE);
        }
    };
    let resolved = match resolve(&text, tolerance) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            eprintln!("{}", serde_json::to_string(&e)?);
            return Ok(USAGE);
        }
    };
    let report = verify(&resolved);
    print_reports(std::slice::from_ref(&report), emit)?;
    if !report.pass() {
        eprintln!("failed: {}", report.failed_verdicts().join(", "));
    }
    Ok(status(report.pass()))
}

fn cmd_suite(seed: u64, max_order: usize, reproducer: &PathBuf) -> anyhow::Result<u8> {
    let report = match suite::run(SuiteConfig { seed, max_order }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qtwist: {e}");
            return Ok(USAGE);
        }
    };
    writeln!(std::io::stdout().lock(), "{}", report.to_json())?;
    eprintln!(
        "{} instances, {} witness checks, {} scenarios, {} failures",
        report.instances.len(),
        report.witness_checks.len(),
        report.scenarios.len(),
        report.failures.len()
    );
    for f in &report.failures {
        eprintln!("  {f}");
    }
    if let Some(spec) = report.reproducer() {
        std::fs::write(reproducer, spec.to_json())
            .with_context(|| format!("writing {}", reproducer.display()))?;
        eprintln!("reproducer written to {}", reproducer.display());
    }
    Ok(status(report.pass))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Verify {
            spec,
            tolerance,
            emit,
        } => cmd_verify(&spec, tolerance, emit),
        Command::Example { preset, emit } => {
            let reports = match examples::run(&preset, Tolerance::default()) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("qtwist: {e}");
                    return Ok(USAGE);
                }
            };
            print_reports(&reports, emit)?;
            Ok(status(reports.iter().all(Report::pass)))
        }
        Command::Suite {
            seed,
            max_order,
            reproducer,
        } => cmd_suite(seed, max_order, &reproducer),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qtwist: {e:#}");
            ExitCode::from(FAIL)
        }
    }
}
