use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use venuepulse_core::elasticity::{
    diff_golden, qqe_table, qqe_table_from_series, read_table, write_table, GoldenDiff, QqeRow, Regime,
    TableError,
};
use venuepulse_core::format::{fixed, QQE_DECIMALS};

use crate::config::{OutputFormat, RunConfig};
use crate::exit::{golden, schema, usage};
use crate::inputs;
use crate::output::Output;

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    row: &'a QqeRow,
    regime: Option<Regime>,
}

fn undefined_reason(row: &QqeRow) -> Option<String> {
    let p = row.point?;
    if p.is_defined() {
        return None;
    }
    let why = if row.n_t == 0 {
        "N_t = 0"
    } else if p.p_t.is_none() {
        "N_{t-1} = 0"
    } else {
        "C_{t-1} = 0"
    };
    Some(format!("{} {}: QQE undefined ({why})", row.label, row.year))
}

fn computed_rows(config: &RunConfig, aggregates: Option<&Path>, warnings: &mut Vec<String>) -> Result<Vec<QqeRow>> {
    let mut rows = Vec::new();
    if let Some(path) = aggregates {
        let mut series = inputs::aggregates(path, config)?;
        if !config.venues.is_empty() {
            series.retain(|(label, _)| config.venues.contains(label));
        }
        if series.is_empty() {
            return Err(usage("no venues matched").into());
        }
        for (label, points) in &series {
            rows.extend(qqe_table_from_series(label, points, config.unit_band));
        }
    } else {
        let corpus = inputs::corpus(config)?;
        for venue in inputs::select_venues(&corpus, &config.venues, warnings)? {
            rows.extend(qqe_table(&corpus, &venue, config.unit_band)?);
        }
    }
    Ok(rows)
}

fn report_diff(diff: &GoldenDiff) {
    println!(
        "golden: {} rows compared, {} flagged, {} missing, tolerance {}",
        diff.compared_rows,
        diff.flagged.len(),
        diff.missing.len(),
        diff.tolerance
    );
    for (column, dev) in &diff.max_abs_deviation {
        println!("  max |deviation| {column:>8}: {}", fixed(*dev, 6));
    }
    for f in &diff.failures {
        let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| fixed(v, QQE_DECIMALS));
        println!(
            "  FAIL {} {} {}: expected {}, computed {}",
            f.label,
            f.year,
            f.column,
            cell(f.expected),
            cell(f.actual)
        );
    }
    for (label, year) in &diff.missing {
        println!("  MISSING {label} {year}");
    }
}

pub fn run(config: &RunConfig, aggregates: Option<&Path>, golden_path: Option<&Path>) -> Result<()> {
    let out = Output::new(&config.output_dir)?;
    let mut warnings = Vec::new();
    let rows = computed_rows(config, aggregates, &mut warnings)?;
    warnings.extend(rows.iter().filter_map(undefined_reason));

    for format in &config.output_formats {
        match format {
            OutputFormat::Csv => {
                let mut buf = Vec::new();
                write_table(&rows, &mut buf)?;
                out.raw("qqe.csv", &buf)?;
            }
            OutputFormat::Json => {
                let json: Vec<JsonRow> = rows
                    .iter()
                    .map(|row| JsonRow {
                        row,
                        regime: row.point.map(|p| p.regime),
                    })
                    .collect();
                out.json("qqe.json", &json)?;
            }
        }
    }

    let Some(golden_path) = golden_path else {
        return out.warnings("qqe", &warnings);
    };
    let mut reference = read_table(golden_path).map_err(|e| match e {
        TableError::Io(e) => usage(format!("{}: {e}", golden_path.display())),
        e => schema(format!("{}: {e}", golden_path.display())),
    })?;
    // A venue selection narrows the reference too; other venues are not "missing".
    if !config.venues.is_empty() {
        reference.retain(|g| config.venues.contains(&g.label));
    }
    let diff = diff_golden(&rows, &reference, config.golden_tolerance, &config.flagged_rows);
    for (label, year) in &diff.flagged {
        warnings.push(format!("{label} {year}: flagged, excluded from the golden diff"));
    }
    out.json("qqe.golden-diff.json", &diff)?;
    out.warnings("qqe", &warnings)?;
    report_diff(&diff);
    if diff.passed() {
        Ok(())
    } else {
        Err(golden(format!(
            "{} golden row(s) outside tolerance {}, {} missing",
            diff.failing_rows().len(),
            diff.tolerance,
            diff.missing.len()
        ))
        .into())
    }
}
