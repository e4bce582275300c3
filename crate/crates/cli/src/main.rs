// negated comparisons reject NaN together with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

mod config;
mod report;
mod suites;
mod tabulate;

use config::{Format, Overrides, RunConfig, UsageError};
use report::VerificationReport;
use suites::{verify_suite, Suite};
use tabulate::{tabulate, TabArgs, TabError, Target};

/// Landau levels in a magnetic-solenoid field: verification suites and tables.
#[derive(Parser)]
#[command(name = "msf", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Cmd {
    /// Run a verification suite and write its report
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Overrides,
    },
    /// Evaluate a quantity on a grid
    Tabulate {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        args: TabArgs,
        #[command(flatten)]
        common: Overrides,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn emit(cfg: &RunConfig, text: &str) -> Result<(), UsageError> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| UsageError(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| UsageError(e.to_string()))
        }
    }
}

fn usage(e: UsageError) -> ExitCode {
    eprintln!("msf: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { suite, common } => {
            let cfg = match RunConfig::resolve(&common) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let start = Instant::now();
            let records = verify_suite(&cfg, suite);
            let wall = cfg.record_timing.then(|| start.elapsed().as_secs_f64());
            let report = VerificationReport::new(suite.name(), &cfg, records, wall);
            if let Err(e) = emit(&cfg, &report.render(cfg.format.unwrap_or(Format::Json))) {
                return usage(e);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                for r in report.failures() {
                    let note = r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
                    eprintln!("FAIL {} achieved {:e} tolerance {:e}{note}", r.name, r.achieved_error.0, r.tolerance.0);
                }
                eprintln!("msf: {} of {} checks failed", report.meta.failed, report.meta.checks);
                ExitCode::from(EXIT_FAIL)
            }
        }
        Cmd::Tabulate { target, args, common } => {
            let cfg = match RunConfig::resolve(&common) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            match tabulate(target, &args, &cfg) {
                Ok(t) => match emit(&cfg, &t.render(cfg.format.unwrap_or(Format::Csv), &cfg)) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => usage(e),
                },
                Err(TabError::Usage(e)) => usage(e),
                Err(TabError::Compute(e)) => {
                    eprintln!("msf: {e}");
                    ExitCode::from(EXIT_FAIL)
                }
            }
        }
    }
}
