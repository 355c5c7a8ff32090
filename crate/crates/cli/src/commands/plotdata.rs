use std::str::FromStr;

use anyhow::Result;
use serde::Serialize;
use venuepulse_core::format::fixed;
use venuepulse_core::indicators::{trajectory, year_vector, Indicator, TrajectoryParams};
use venuepulse_core::quantile::{log_percentiles, PLOT_PERCENTILES};

use crate::config::{OutputFormat, RunConfig};
use crate::exit::usage;
use crate::inputs;
use crate::output::{file_stem, Output};

/// Plot series carry more precision than the summary table.
const DECIMALS: usize = 4;
const PERCENTILE_HEADER: [&str; 7] = ["year", "n", "p5", "p25", "p50", "p75", "p95"];

#[derive(Serialize)]
struct Point {
    year: i32,
    value: f64,
}

#[derive(Serialize)]
struct Percentiles {
    year: i32,
    n: usize,
    log10_1p: [f64; 5],
}

#[derive(Serialize)]
struct SeriesFile<'a> {
    venue: &'a str,
    indicator: &'a str,
    series: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    percentiles: Option<Vec<Percentiles>>,
}

pub fn run(config: &RunConfig, indicator: &str, log_scale: bool) -> Result<()> {
    let indicator = Indicator::from_str(indicator).map_err(|e| usage(e.to_string()))?;
    let out = Output::new(&config.output_dir)?;
    let corpus = inputs::corpus(config)?;
    let mut warnings = Vec::new();
    let venues = inputs::select_venues(&corpus, &config.venues, &mut warnings)?;
    let params = TrajectoryParams {
        window: config.trajectory_window,
        hcr_threshold: config.hcr_threshold,
        milestone: config.milestone(),
    };
    debug_assert_eq!(PLOT_PERCENTILES.len(), 5);

    for venue in &venues {
        let series = trajectory(&corpus, venue, indicator, &params)?;
        let present: Vec<i32> = series.iter().map(|p| p.0).collect();
        for year in corpus.window().years().filter(|y| !present.contains(y)) {
            warnings.push(format!("{venue} {year}: no papers, year omitted"));
        }
        let percentiles = if log_scale {
            let mut rows = Vec::new();
            for year in corpus.window().years() {
                let v = year_vector(&corpus, venue, year, params.window)?;
                if let Some(p) = log_percentiles(&v) {
                    rows.push(Percentiles {
                        year,
                        n: v.len(),
                        log10_1p: p,
                    });
                }
            }
            Some(rows)
        } else {
            None
        };

        let stem = format!("plotdata/{}/{}", indicator.name(), file_stem(venue));
        for format in &config.output_formats {
            match format {
                OutputFormat::Csv => {
                    out.csv(
                        &format!("{stem}.csv"),
                        &["year", "value"],
                        series.iter().map(|(y, v)| [y.to_string(), fixed(*v, DECIMALS)]),
                    )?;
                    if let Some(rows) = &percentiles {
                        out.csv(
                            &format!("{stem}.percentiles.csv"),
                            &PERCENTILE_HEADER,
                            rows.iter().map(|r| {
                                let mut cells = vec![r.year.to_string(), r.n.to_string()];
                                cells.extend(r.log10_1p.iter().map(|v| fixed(*v, DECIMALS)));
                                cells
                            }),
                        )?;
                    }
                }
                OutputFormat::Json => {
                    let file = SeriesFile {
                        venue,
                        indicator: indicator.name(),
                        series: series.iter().map(|&(year, value)| Point { year, value }).collect(),
                        percentiles: percentiles.as_ref().map(|rows| {
                            rows.iter()
                                .map(|r| Percentiles { year: r.year, n: r.n, log10_1p: r.log10_1p })
                                .collect()
                        }),
                    };
                    out.json(&format!("{stem}.json"), &file)?;
                }
            }
        }
    }
    out.warnings(&format!("plotdata/{}", indicator.name()), &warnings)
}
