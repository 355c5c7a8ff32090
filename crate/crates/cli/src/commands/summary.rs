use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use venuepulse_core::elasticity::{mean_magnitude, qqe_table_from_series};
use venuepulse_core::format::{fixed_or, INDICATOR_DECIMALS};
use venuepulse_core::indicators::{mean_growth_rate, TopVenueRegistry};
use venuepulse_core::report::{venue_report, IndicatorReport, ReportParams, SUMMARY_HEADER};

use crate::config::{OutputFormat, RunConfig};
use crate::exit::usage;
use crate::inputs;
use crate::output::Output;

pub const QQE_NOTE: &str = "QQE column: mean of the defined annual |QQE_t| over the window";

#[derive(Serialize)]
struct SummaryFile<'a, R: Serialize> {
    qqe_column: &'static str,
    window: (i32, i32),
    params: ReportParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    registry: Option<&'a RegistryInfo>,
    rows: &'a [R],
}

#[derive(Serialize)]
struct RegistryInfo {
    conferences: usize,
    journals: usize,
}

/// Scale columns and the QQE column from an `N_t, C_t` series alone.
#[derive(Debug, Serialize)]
pub struct ScaleRow {
    pub venue: String,
    pub pc: u64,
    pub apgr: Option<f64>,
    pub acgr: Option<f64>,
    pub qqe: Option<f64>,
}

impl ScaleRow {
    fn csv_row(&self) -> Vec<String> {
        let f = |v: Option<f64>| fixed_or(v, INDICATOR_DECIMALS, "");
        let mut row = vec![self.venue.clone(), self.pc.to_string(), f(self.apgr), f(self.acgr)];
        row.resize(SUMMARY_HEADER.len() - 1, String::new());
        row.push(f(self.qqe));
        row
    }
}

fn write<R: Serialize>(
    config: &RunConfig,
    out: &Output,
    csv_rows: Vec<Vec<String>>,
    rows: &[R],
    registry: Option<RegistryInfo>,
) -> Result<()> {
    for format in &config.output_formats {
        match format {
            OutputFormat::Csv => out.csv("summary.csv", &SUMMARY_HEADER, &csv_rows)?,
            OutputFormat::Json => out.json(
                "summary.json",
                &SummaryFile {
                    qqe_column: QQE_NOTE,
                    window: config.window,
                    params: config.report_params(),
                    registry: registry.as_ref(),
                    rows,
                },
            )?,
        };
    }
    Ok(())
}

fn from_aggregates(config: &RunConfig, path: &Path, out: &Output, warnings: &mut Vec<String>) -> Result<()> {
    let mut series = inputs::aggregates(path, config)?;
    if !config.venues.is_empty() {
        series.retain(|(label, _)| config.venues.contains(label));
    }
    if series.is_empty() {
        return Err(usage("no venues matched").into());
    }
    let mut rows = Vec::new();
    for (label, points) in &series {
        let n: Vec<(i32, u64)> = points.iter().map(|&(y, n, _)| (y, n)).collect();
        let c: Vec<(i32, u64)> = points.iter().map(|&(y, _, c)| (y, c)).collect();
        let apgr = mean_growth_rate(&n);
        for (a, b) in &apgr.skipped_pairs {
            warnings.push(format!("{label}: APGR skips {a}->{b} (zero paper count)"));
        }
        let qqe = qqe_table_from_series(label, points, config.unit_band);
        rows.push(ScaleRow {
            venue: label.clone(),
            pc: n.iter().map(|p| p.1).sum(),
            apgr: apgr.mean_percent,
            acgr: mean_growth_rate(&c).mean_percent,
            qqe: mean_magnitude(&qqe),
        });
    }
    warnings.push("influence and prestige columns need a paper-level corpus; left empty".into());
    let csv_rows = rows.iter().map(ScaleRow::csv_row).collect();
    write(config, out, csv_rows, &rows, None)
}

pub fn run(config: &RunConfig, aggregates: Option<&Path>) -> Result<()> {
    let out = Output::new(&config.output_dir)?;
    let mut warnings = vec![QQE_NOTE.to_string()];
    if let Some(path) = aggregates {
        from_aggregates(config, path, &out, &mut warnings)?;
        return out.warnings("summary", &warnings);
    }

    let registry = match &config.registry_path {
        Some(p) => Some(TopVenueRegistry::load(p).map_err(|e| usage(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let corpus = inputs::corpus(config)?;
    let venues = inputs::select_venues(&corpus, &config.venues, &mut warnings)?;
    let params = config.report_params();

    // one worker per venue; results are collected in selection order
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = venues
            .iter()
            .map(|v| {
                let corpus = &corpus;
                s.spawn(move || venue_report(corpus, v, &params))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut rows: Vec<IndicatorReport> = Vec::new();
    for (venue, result) in venues.iter().zip(results) {
        match result {
            Ok(r) => {
                for (a, b) in &r.skipped_growth_pairs {
                    warnings.push(format!("{venue}: APGR skips {a}->{b} (zero paper count)"));
                }
                if r.tcs.is_none() {
                    warnings.push(format!("{venue}: no citations, TCS/TJS undefined"));
                }
                if r.qqe.is_none() {
                    warnings.push(format!("{venue}: no defined annual QQE"));
                }
                rows.push(r);
            }
            Err(e) => warnings.push(format!("{venue}: skipped: {e}")),
        }
    }
    if rows.is_empty() {
        return Err(usage("no venues matched").into());
    }
    let csv_rows = rows.iter().map(IndicatorReport::csv_row).collect();
    let info = registry.map(|r| RegistryInfo {
        conferences: r.conferences().count(),
        journals: r.journals().count(),
    });
    write(config, &out, csv_rows, &rows, info)?;
    out.warnings("summary", &warnings)
}
