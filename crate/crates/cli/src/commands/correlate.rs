use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use venuepulse_core::elasticity::field_qqe;
use venuepulse_core::format::fixed_or;
use venuepulse_core::stats::{spearman, spearman_permutation_p, MAX_PERMUTATION_N};

use crate::config::{OutputFormat, RunConfig};
use crate::exit::usage;
use crate::inputs;
use crate::output::Output;

/// r and p are printed at three decimals.
const DECIMALS: usize = 3;
const HEADER: [&str; 7] = ["category", "n", "r", "p", "p_exact", "significant", "note"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GroupBy {
    #[value(name = "ai_category")]
    AiCategory,
}

#[derive(Debug, Serialize)]
pub struct CorrelationRow {
    pub category: String,
    pub n: usize,
    pub r: Option<f64>,
    pub p: Option<f64>,
    /// Exact permutation p-value, computed for small samples.
    pub p_exact: Option<f64>,
    pub significant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CorrelationRow {
    fn csv_row(&self) -> Vec<String> {
        let f = |v: Option<f64>| fixed_or(v, DECIMALS, "");
        vec![
            self.category.clone(),
            self.n.to_string(),
            f(self.r),
            f(self.p),
            f(self.p_exact),
            self.significant.map_or(String::new(), |s| s.to_string()),
            self.note.clone().unwrap_or_default(),
        ]
    }
}

pub fn correlate(category: &str, counts: &[f64], qqe: &[f64], alpha: f64) -> CorrelationRow {
    let n = counts.len();
    let mut row = CorrelationRow {
        category: category.to_string(),
        n,
        r: None,
        p: None,
        p_exact: None,
        significant: None,
        note: None,
    };
    match spearman(counts, qqe) {
        Ok(s) => {
            row.r = Some(s.r);
            row.p = Some(s.p);
            row.significant = Some(s.p <= alpha);
            if n <= MAX_PERMUTATION_N {
                row.p_exact = spearman_permutation_p(counts, qqe).ok();
            }
            if s.tie_adjusted {
                row.note = Some("ties: Pearson correlation of average ranks".into());
            }
        }
        Err(e) => row.note = Some(format!("skipped: {e}")),
    }
    row
}

fn from_corpus(config: &RunConfig) -> Result<inputs::CategoryPoints> {
    let corpus = inputs::corpus(config)?;
    let mut out = Vec::new();
    for category in corpus.categories() {
        let series = field_qqe(&corpus, category, config.field_qqe_mode)?;
        let points = series
            .iter()
            .filter_map(|f| f.qqe.map(|q| (f.year, f.n_t as f64, q)))
            .collect();
        out.push((category.to_string(), points));
    }
    Ok(out)
}

pub fn run(config: &RunConfig, _by: GroupBy, series: Option<&Path>) -> Result<()> {
    let out = Output::new(&config.output_dir)?;
    let groups = match series {
        Some(path) => inputs::category_series(path)?,
        None => from_corpus(config)?,
    };
    if groups.is_empty() {
        return Err(usage("no categories found").into());
    }
    let mut warnings = Vec::new();
    let rows: Vec<CorrelationRow> = groups
        .iter()
        .map(|(category, points)| {
            let counts: Vec<f64> = points.iter().map(|p| p.1).collect();
            let qqe: Vec<f64> = points.iter().map(|p| p.2).collect();
            let row = correlate(category, &counts, &qqe, config.significance_level);
            if row.r.is_none() {
                warnings.push(format!("{category}: {}", row.note.as_deref().unwrap_or("skipped")));
            }
            row
        })
        .collect();
    for format in &config.output_formats {
        match format {
            OutputFormat::Csv => out.csv("correlate.csv", &HEADER, rows.iter().map(CorrelationRow::csv_row))?,
            OutputFormat::Json => out.json("correlate.json", &rows)?,
        };
    }
    out.warnings("correlate", &warnings)
}
