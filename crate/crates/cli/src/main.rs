use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bisector_cli::formats::{self, Input, SpecDefaults};
use bisector_cli::harness::{self, HarnessReport};
use bisector_cli::{lemmas, Rayon};
use bisector_core::stats::ReportOptions;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bisector", version, about = "Exact bisector-energy and pinned-distance statistics")]
struct Cli {
    /// Field for point lists and field-dependent families: `prime:<p>` or `rational`.
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    /// Seed for the random family when the spec does not give one.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Count degenerate (r² = 0) circles when computing the richness M.
    #[arg(long, global = true)]
    include_degenerate_circles: bool,
    /// Cap for 𝒬_M and I_M (defaults to M).
    #[arg(long, global = true)]
    cap: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the point set of a spec, e.g. '{"family":"grid","p":5,"s":5}'.
    Gen { spec: String },
    /// Statistics of a spec, a point-set JSON or a point-list file.
    Stats { input: String },
    /// Run the lemma suite; exits nonzero if anything fails.
    Verify,
    /// Statistics and fitted log-log slopes for a JSON list of specs.
    Sweep { specs: String },
}

fn emit_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit_reports(rows: &[HarnessReport], format: Format, json: serde_json::Value) -> Result<()> {
    match format {
        Format::Json => emit_json(&json),
        Format::Csv => Ok(harness::write_csv(rows, std::io::stdout().lock())?),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let defaults = SpecDefaults { field: formats::parse_field(&cli.field)?, seed: cli.seed };
    let opts = ReportOptions { cap: cli.cap, include_degenerate: cli.include_degenerate_circles };
    match cli.command {
        Command::Gen { spec } => {
            let text = formats::read_input(&spec).context("reading spec")?;
            let spec = formats::parse_spec(serde_json::from_str(&text)?, defaults)?;
            let set = spec.generate()?;
            match cli.format {
                Format::Json => emit_json(&formats::point_set_json(&set))?,
                Format::Csv => {
                    let mut out = std::io::stdout().lock();
                    for p in set.points() {
                        writeln!(out, "{},{}", p.x, p.y)?;
                    }
                }
            }
            Ok(true)
        }
        Command::Stats { input } => {
            let text = formats::read_input(&input).context("reading input")?;
            let report = match formats::parse_input(&text, defaults)? {
                Input::Spec(spec) => harness::run_stats(&spec, &opts, &Rayon)?,
                Input::Points(set) => harness::stats_for_set(None, &set, &opts, &Rayon)?,
            };
            emit_reports(std::slice::from_ref(&report), cli.format, harness::report_json(&report))?;
            Ok(report.is_ok())
        }
        Command::Verify => {
            let results = lemmas::run_suite(&Rayon);
            match cli.format {
                Format::Json => emit_json(&lemmas::suite_json(&results))?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                    w.write_record(["name", "cases", "failures", "ok"])?;
                    for r in &results {
                        w.write_record([r.name.clone(), r.cases.to_string(), r.failures.to_string(), r.ok().to_string()])?;
                    }
                    w.flush()?;
                }
            }
            Ok(results.iter().all(lemmas::LemmaResult::ok))
        }
        Command::Sweep { specs } => {
            let text = formats::read_input(&specs).context("reading specs")?;
            let specs = formats::parse_specs(serde_json::from_str(&text)?, defaults)?;
            let report = harness::sweep(&specs, &opts, &Rayon)?;
            emit_reports(&report.rows, cli.format, harness::sweep_json(&report))?;
            Ok(report.is_ok())
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = c.downcast_ref::<std::io::Error>().or_else(|| match c.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(io) => Some(io),
            _ => None,
        });
        io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
