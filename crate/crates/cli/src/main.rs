use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use chaoskit::families::CATALOG;
use chaoskit::plot::{plotdata, PlotKind, PlotParams};
use chaoskit::report::{analyze, load_map, AnalysisConfig};
use chaoskit::Rat;

/// Exact analysis of piecewise-linear interval maps.
#[derive(Debug, Parser)]
#[command(name = "chaoskit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the analysis pipeline and write a JSON report.
    Analyze {
        /// Catalog id (e.g. `tent:2`), path to a JSON map spec, or inline JSON.
        map: String,
        #[arg(long, default_value_t = 16)]
        periods: usize,
        #[arg(long = "lap-n", default_value_t = 12)]
        lap_n: usize,
        #[arg(long = "horseshoe-power", default_value_t = 4)]
        horseshoe_power: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Mixing margin as a fraction of the domain length.
        #[arg(long = "mixing-eps", default_value = "1/32")]
        mixing_eps: Rat,
        /// Dyadic scale of the tested intervals.
        #[arg(long, default_value_t = 5)]
        scale: u32,
        /// Iterates allowed for interval-image evidence.
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        #[arg(long = "dc-samples", default_value_t = 50)]
        dc_samples: usize,
        #[arg(long = "dc-horizon", default_value_t = 10_000)]
        dc_horizon: usize,
        #[arg(long, default_value_t = 256)]
        precision: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall-clock time per stage (makes the report non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write plot data as CSV.
    Plot {
        map: String,
        #[arg(long, value_parser = parse_kind)]
        kind: PlotKind,
        #[arg(long)]
        x0: Option<Rat>,
        /// Second seed for distribution functions.
        #[arg(long)]
        y0: Option<Rat>,
        /// Steps (cobweb, orbit) or horizon (distfn).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in map families.
    Catalog {
        #[arg(long)]
        list: bool,
    },
}

fn parse_kind(s: &str) -> Result<PlotKind, String> {
    s.parse().map_err(|e: chaoskit::Error| e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            map,
            periods,
            lap_n,
            horseshoe_power,
            depth,
            mixing_eps,
            scale,
            horizon,
            dc_samples,
            dc_horizon,
            precision,
            seed,
            timing,
            out,
        } => {
            let defaults = AnalysisConfig::default();
            let config = AnalysisConfig {
                period_bound: periods,
                entropy_lap_n: lap_n,
                horseshoe_power,
                horseshoe_depth: depth,
                mixing_eps,
                mixing_scale: scale,
                evidence_horizon: horizon,
                dc_samples,
                dc_horizon,
                precision_bits: precision,
                seed: seed.unwrap_or(defaults.seed),
                timing,
                ..defaults
            };
            let report = analyze(&map, &config)?;
            emit(&out, &report.to_json())?;
            if report.budget_exceeded() {
                eprintln!("chaoskit: budget exceeded in some sections; the report is partial");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Plot {
            map,
            kind,
            x0,
            y0,
            n,
            out,
        } => {
            let (_, f) = load_map(&map)?;
            let defaults = PlotParams::default();
            let n = n.unwrap_or(if kind == PlotKind::DistFn { 10_000 } else { defaults.n });
            let params = PlotParams { x0, y0, n, ..defaults };
            emit(&out, &plotdata(&f, kind, &params)?)?;
        }
        Command::Catalog { list: _ } => {
            for (id, about) in CATALOG {
                println!("{id:<16} {about}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("chaoskit: {e:#}");
            ExitCode::FAILURE
        }
    }
}
