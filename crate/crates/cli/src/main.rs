use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entrolab::run::{run_path, Options};
use entrolab::selftest::{report_json, run_selected, SUITES};

/// Exact entropy computations for endomorphisms of abelian groups.
#[derive(Parser)]
#[command(name = "entrolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file, or every `*.json` file of a directory.
    Run {
        path: PathBuf,
        /// Include cotrajectory traces in the output.
        #[arg(long)]
        trace: bool,
        /// Worker threads for suprema over the base.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the invariant suites.
    Selftest {
        /// A suite name such as `duality/sums`, or a family such as `duality`.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { path, trace, jobs } => {
            let out = run_path(&path, &Options { trace, jobs });
            if let Some(e) = out.json.get("error") {
                eprintln!("entrolab: {}", e["message"].as_str().unwrap_or("error"));
            }
            emit(&out.json);
            ExitCode::from(out.outcome.exit_code() as u8)
        }
        Command::Selftest { suite } => {
            let Some(reports) = run_selected(suite.as_deref()) else {
                eprintln!("entrolab: no suite matches {:?}; known suites:", suite.unwrap_or_default());
                for s in SUITES {
                    eprintln!("  {:<28} {}", s.name, s.about);
                }
                return ExitCode::from(2);
            };
            for r in &reports {
                eprintln!("{:<28} {:>8} checks {:>4} failed {:>8.2}s {}", r.name, r.checked, r.failed, r.seconds, if r.passed() { "ok" } else { "FAIL" });
                for f in &r.failures {
                    eprintln!("    {f}");
                }
            }
            emit(&report_json(&reports));
            ExitCode::from(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
        }
    }
}

/// A closed pipe downstream is not an error of ours.
fn emit(v: &serde_json::Value) {
    let mut out = std::io::stdout().lock();
    let _ = serde_json::to_writer_pretty(&mut out, v).and_then(|()| writeln!(out).map_err(serde_json::Error::io));
}
