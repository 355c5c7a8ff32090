//! Loading the corpus and the tabular side inputs.

use std::path::Path;

use anyhow::Result;
use serde::Deserialize;
use venuepulse_core::corpus::{load_corpus, CorpusFileError};
use venuepulse_core::Corpus;

use crate::config::RunConfig;
use crate::exit::{schema, usage};

pub fn corpus(config: &RunConfig) -> Result<Corpus> {
    let path = config
        .corpus_path
        .as_deref()
        .ok_or_else(|| usage("no corpus given (use --corpus or corpus_path in the config)"))?;
    let corpus = load_corpus(path, config.window()).map_err(|e| match e {
        CorpusFileError::Io { .. } => usage(e.to_string()),
        e => schema(e.to_string()),
    })?;
    log::info!("loaded {} records from {}", corpus.len(), path.display());
    Ok(corpus)
}

/// Requested venues present in the corpus, in request order; every present
/// venue when none are requested.
pub fn select_venues(corpus: &Corpus, requested: &[String], warnings: &mut Vec<String>) -> Result<Vec<String>> {
    let present: Vec<String> = corpus.venues_present().map(str::to_string).collect();
    let selected: Vec<String> = if requested.is_empty() {
        present
    } else {
        let mut out = Vec::new();
        for v in requested {
            if present.contains(v) {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            } else {
                warnings.push(format!("venue {v}: no papers in the corpus, skipped"));
            }
        }
        out
    };
    if selected.is_empty() {
        return Err(usage("no venues matched").into());
    }
    Ok(selected)
}

#[derive(Debug, Deserialize)]
struct AggregateRow {
    #[serde(rename = "Conference")]
    label: String,
    #[serde(rename = "Year")]
    year: i32,
    #[serde(rename = "N_t")]
    n_t: u64,
    #[serde(rename = "C_t")]
    c_t: u64,
}

/// One `(year, N_t, C_t)` series per label, labels in first-appearance order.
pub type Series = Vec<(String, Vec<(i32, u64, u64)>)>;

fn push_point<T>(groups: &mut Vec<(String, Vec<T>)>, label: &str, point: T) {
    match groups.iter_mut().find(|(l, _)| l == label) {
        Some((_, v)) => v.push(point),
        None => groups.push((label.to_string(), vec![point])),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())).into())
}

/// Reads a `Conference,Year,N_t,C_t[,...]` file. Years of a label must be
/// consecutive and increasing.
pub fn aggregates(path: &Path, config: &RunConfig) -> Result<Series> {
    let mut groups: Series = Vec::new();
    for (i, row) in csv_reader(path)?.deserialize::<AggregateRow>().enumerate() {
        let row = row.map_err(|e| schema(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        let window = config.window();
        if window.contains(row.year) {
            push_point(&mut groups, &row.label, (row.year, row.n_t, row.c_t));
        }
    }
    for (label, points) in &groups {
        if points.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
            return Err(schema(format!("{}: years of {label} are not consecutive", path.display())).into());
        }
    }
    Ok(groups)
}

#[derive(Debug, Deserialize)]
struct CategoryRow {
    category: String,
    year: i32,
    paper_count: f64,
    qqe: f64,
}

/// Per category: (year, paper count, QQE).
pub type CategoryPoints = Vec<(String, Vec<(i32, f64, f64)>)>;

/// Reads a `category,year,paper_count,qqe` file into `(year, count, qqe)`
/// points per category.
pub fn category_series(path: &Path) -> Result<CategoryPoints> {
    let mut groups = Vec::new();
    for (i, row) in csv_reader(path)?.deserialize::<CategoryRow>().enumerate() {
        let row = row.map_err(|e| schema(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        push_point(&mut groups, &row.category, (row.year, row.paper_count, row.qqe));
    }
    Ok(groups)
}
