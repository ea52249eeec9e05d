//! `ndschaos`: runs one experiment per config and writes one CSV artifact.
//!
//! Exit status: 0 on success, 1 for usage and schema errors, 2 for numeric
//! or validation failures. Nothing is written unless the run succeeds.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use commands::{Globals, MixingRequest};
use config::SystemRef;
use ndschaos::{Error, Result};
use output::Report;

#[derive(Debug, Parser)]
#[command(name = "ndschaos", version, about = "Orbits, distributional chaos estimators and constructions for non-autonomous systems")]
struct Cli {
    /// JSON experiment config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for pair scans. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    /// Seed for sampled experiments; overrides the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orbit of one point at the configured times.
    Orbit,
    /// Distributional estimates and relation flags of one pair.
    PairStats,
    /// Flags of every pair of a sample.
    ScanPairs,
    /// Relative densities, density-one witnesses, Cesaro splitting.
    Density,
    /// Build AAPO orbits, coded pairs and merged index sequences
    #[command(subcommand)]
    Construct(Construct),
    /// Search for witnesses of dynamical properties
    #[command(subcommand)]
    Probe(Probe),
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Asymptotic average pseudo-orbit from a separated pair.
    Aapo,
    /// Pair of points coded through a nested interval family.
    Expanding,
    /// Index sequence merged from an asymptotic and a distal sequence.
    Merge,
}

#[derive(Debug, Subcommand)]
enum Probe {
    /// Searches for a common transit time of two pairs of open intervals.
    WeakMixing(MixingArgs),
}

type Runner<'a> = Box<dyn Fn(&mut Report) -> Result<()> + 'a>;

fn parse_interval(s: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok([p(a)?, p(b)?])
}

#[derive(Debug, Args)]
struct MixingArgs {
    /// Gallery system id, instead of a config.
    #[arg(long)]
    gallery: Option<String>,
    /// First source interval.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, value_name = "LO,HI")]
    u1: Option<[f64; 2]>,
    /// First target interval.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, value_name = "LO,HI")]
    v1: Option<[f64; 2]>,
    /// Second source interval.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, value_name = "LO,HI")]
    u2: Option<[f64; 2]>,
    /// Second target interval.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, value_name = "LO,HI")]
    v2: Option<[f64; 2]>,
    /// Largest transit time tried.
    #[arg(long)]
    horizon: Option<u64>,
    /// Grid points per source interval.
    #[arg(long)]
    sample_density: Option<usize>,
}

/// Reads the config and echoes it, keys sorted, into the report.
fn load<T: DeserializeOwned>(path: Option<&Path>, report: &mut Report) -> Result<T> {
    let path = path.ok_or_else(|| Error::Config("--config is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = config::parse(&text)?;
    report.param("config", serde_json::to_string(&value).expect("json value serializes"));
    serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report> {
    let g = Globals {
        threads: cli.threads as usize,
        seed: cli.seed,
    };
    let cfg = cli.config.as_deref();
    let (name, run): (&str, Runner) = match &cli.command {
        Command::Orbit => ("orbit", Box::new(|r| commands::orbit(&load(cfg, r)?, r))),
        Command::PairStats => ("pair-stats", Box::new(|r| commands::pair_stats(&load(cfg, r)?, r))),
        Command::ScanPairs => ("scan-pairs", Box::new(|r| commands::scan(&load(cfg, r)?, &g, r))),
        Command::Density => ("density", Box::new(|r| commands::density(&load(cfg, r)?, r))),
        Command::Construct(Construct::Aapo) => {
            ("construct-aapo", Box::new(|r| commands::aapo(&load(cfg, r)?, r)))
        }
        Command::Construct(Construct::Expanding) => {
            ("construct-expanding", Box::new(|r| commands::expanding(&load(cfg, r)?, r)))
        }
        Command::Construct(Construct::Merge) => {
            ("construct-merge", Box::new(|r| commands::merge(&load(cfg, r)?, r)))
        }
        Command::Probe(Probe::WeakMixing(args)) => ("probe-weak-mixing", Box::new(move |r| mixing(args, cfg, r))),
    };
    let mut report = Report::new(name);
    run(&mut report)?;
    Ok(report)
}

fn mixing(args: &MixingArgs, cfg: Option<&Path>, r: &mut Report) -> Result<()> {
    let opens = [args.u1, args.v1, args.u2, args.v2];
    let req = match (&args.gallery, cfg) {
        (Some(_), Some(_)) => return Err(Error::Config("give either --gallery or --config".into())),
        (Some(id), None) => MixingRequest {
            system: SystemRef::Gallery { gallery: id.clone() },
            opens,
            horizon: args.horizon,
            sample_density: args.sample_density,
        },
        (None, Some(_)) => {
            let c: config::MixingConfig = load(cfg, r)?;
            let pick = |flag: Option<[f64; 2]>, file: Option<[f64; 2]>| flag.or(file);
            MixingRequest {
                system: c.system,
                opens: [
                    pick(opens[0], c.u1),
                    pick(opens[1], c.v1),
                    pick(opens[2], c.u2),
                    pick(opens[3], c.v2),
                ],
                horizon: args.horizon.or(c.horizon),
                sample_density: args.sample_density.or(c.sample_density),
            }
        }
        (None, None) => return Err(Error::Config("probe weak-mixing needs --gallery or --config".into())),
    };
    commands::weak_mixing(&req, r)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownGallery(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let bytes = run(&cli).and_then(|r| r.render());
    let bytes = match bytes {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
