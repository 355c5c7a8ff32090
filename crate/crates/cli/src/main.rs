//! `venuepulse`: conference bibliometric reports from a citation ledger.

mod commands;
mod config;
mod exit;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::commands::correlate::GroupBy;
use crate::config::{parse_flag, parse_window, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "venuepulse", version, about = "Scale, influence, prestige and elasticity reports for conferences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Restrict to a venue (repeatable).
    #[arg(long = "venue", global = true, value_name = "VENUE")]
    venues: Vec<String>,
    /// Inclusive year window, e.g. 2014:2024.
    #[arg(long, global = true, value_parser = parse_window, value_name = "START:END")]
    window: Option<(i32, i32)>,
    /// Output format (repeatable).
    #[arg(long, global = true, value_enum)]
    format: Vec<OutputFormat>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Corpus file (.csv or .jsonl).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Top-venue registry JSON.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One row of indicators per venue.
    Summary {
        /// Compute scale and QQE columns from a Conference,Year,N_t,C_t file.
        #[arg(long)]
        aggregates: Option<PathBuf>,
    },
    /// Year-over-year elasticity table.
    Qqe {
        #[arg(long)]
        aggregates: Option<PathBuf>,
        /// Reference table to diff against.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Golden row excluded from the diff, LABEL:YEAR (repeatable).
        #[arg(long = "flag", value_parser = parse_flag, value_name = "LABEL:YEAR")]
        flags: Vec<(String, i32)>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Spearman correlation of paper counts and QQE per category.
    Correlate {
        #[arg(long, value_enum, default_value = "ai_category")]
        by: GroupBy,
        /// category,year,paper_count,qqe file instead of the corpus.
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Per-venue yearly series of one indicator.
    Plotdata {
        /// ac, mc, hcr, zcr, gini or mii.
        #[arg(long)]
        indicator: String,
        /// Also export log10(1+c) percentiles per year.
        #[arg(long)]
        log: bool,
    },
    /// Build a corpus from the configured metadata sources.
    Ingest,
}

fn resolve(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !common.venues.is_empty() {
        config.venues = common.venues.clone();
    }
    if let Some(w) = common.window {
        config.window = w;
    }
    if !common.format.is_empty() {
        let mut formats = common.format.clone();
        formats.sort();
        formats.dedup();
        config.output_formats = formats;
    }
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    if let Some(corpus) = &common.corpus {
        config.corpus_path = Some(corpus.clone());
    }
    if let Some(registry) = &common.registry {
        config.registry_path = Some(registry.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let mut config = resolve(&cli.common)?;
    match cli.command {
        Command::Summary { aggregates } => commands::summary::run(&config, aggregates.as_deref()),
        Command::Qqe {
            aggregates,
            golden,
            flags,
            tolerance,
        } => {
            if !flags.is_empty() {
                config.flagged_rows = flags;
            }
            if let Some(t) = tolerance {
                config.golden_tolerance = t;
            }
            config.validate()?;
            commands::qqe::run(&config, aggregates.as_deref(), golden.as_deref())
        }
        Command::Correlate { by, series } => commands::correlate::run(&config, by, series.as_deref()),
        Command::Plotdata { indicator, log } => commands::plotdata::run(&config, &indicator, log),
        Command::Ingest => commands::ingest::run(&config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("venuepulse: {e:#}");
            ExitCode::from(exit::code_of(&e))
        }
    }
}
