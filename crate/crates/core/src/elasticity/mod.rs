//! Quality-quantity elasticity (QQE): growth of citation mass relative to
//! growth of paper count between consecutive years.
//!
//! For year `t` with paper counts `N_t`, `N_{t-1}` and citation masses `C_t`,
//! `C_{t-1}`:
//!
//! ```text
//! P_t = N_t / N_{t-1}      g_t = C_t / C_{t-1}
//! s_t = ln P_t             QQE_t = g_t / P_t
//! ```
//!
//! Exported tables carry a signed QQE that is negative exactly on
//! contraction years (`P_t < 1`).

mod table;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{venue_aggregates, Corpus};
use crate::{Error, Result};

pub use table::{
    diff_golden, parse_table, read_table, write_table, GoldenDiff, GoldenRow, RowDeviation,
    TableError, DEFAULT_GOLDEN_TOLERANCE, TABLE_HEADER,
};

/// Half-width of the band around 1 classified as unitary elasticity.
pub const DEFAULT_UNIT_BAND: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// |QQE| > 1 while expanding.
    EfficientExpansion,
    /// |QQE| > 1 while contracting.
    QualityConcentratingContraction,
    /// |QQE| within the unit band.
    Unitary,
    /// |QQE| < 1 while expanding.
    ImpactDilution,
    /// |QQE| < 1 while contracting.
    MalignantContraction,
    Undefined,
}

/// Elasticity of one year against the previous one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QqePoint {
    /// Defined when `N_{t-1} > 0`; may be 0 in a gap year.
    pub p_t: Option<f64>,
    /// Defined when `C_{t-1} > 0`.
    pub g_t: Option<f64>,
    /// Defined when `P_t > 0`.
    pub s_t: Option<f64>,
    pub qqe_magnitude: Option<f64>,
    pub qqe_signed: Option<f64>,
    pub regime: Regime,
}

impl QqePoint {
    pub fn is_defined(&self) -> bool {
        self.qqe_magnitude.is_some()
    }

    /// Re-derives the regime with a different unit band.
    pub fn with_unit_band(mut self, unit_band: f64) -> Self {
        self.regime = classify_regime(&self, unit_band).unwrap_or(Regime::Undefined);
        self
    }
}

/// Computes P_t, g_t, s_t and QQE_t. Any zero denominator (or `N_t = 0`)
/// yields an undefined elasticity rather than an error, so gap years never
/// abort a trajectory.
pub fn qqe_point(n_t: u64, n_prev: u64, c_t: u64, c_prev: u64) -> QqePoint {
    let p_t = (n_prev > 0).then(|| n_t as f64 / n_prev as f64);
    let g_t = (c_prev > 0).then(|| c_t as f64 / c_prev as f64);
    let s_t = p_t.filter(|&p| p > 0.0).map(f64::ln);
    let qqe_magnitude = match (p_t, g_t) {
        (Some(p), Some(g)) if p > 0.0 => Some(g / p),
        _ => None,
    };
    let qqe_signed = qqe_magnitude.zip(p_t).map(|(m, p)| if p >= 1.0 { m } else { -m });
    let mut point = QqePoint {
        p_t,
        g_t,
        s_t,
        qqe_magnitude,
        qqe_signed,
        regime: Regime::Undefined,
    };
    point.regime = classify_regime(&point, DEFAULT_UNIT_BAND).unwrap_or(Regime::Undefined);
    point
}

/// Joint classification of the elasticity magnitude and the direction of
/// scale change. `s_t = 0` counts as expansion, matching the sign convention.
pub fn classify_regime(point: &QqePoint, unit_band: f64) -> Result<Regime> {
    if unit_band.is_nan() || unit_band <= 0.0 {
        return Err(Error::InvalidParameter(format!("unit band {unit_band} must be > 0")));
    }
    let (m, s) = match (point.qqe_magnitude, point.s_t) {
        (Some(m), Some(s)) => (m, s),
        _ => return Err(Error::UndefinedPoint),
    };
    let expanding = s >= 0.0;
    Ok(if (m - 1.0).abs() <= unit_band {
        Regime::Unitary
    } else if m > 1.0 {
        if expanding {
            Regime::EfficientExpansion
        } else {
            Regime::QualityConcentratingContraction
        }
    } else if expanding {
        Regime::ImpactDilution
    } else {
        Regime::MalignantContraction
    })
}

/// One row of the elasticity table. The first year of a series has no point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QqeRow {
    pub label: String,
    pub year: i32,
    pub n_t: u64,
    pub c_t: u64,
    pub point: Option<QqePoint>,
}

/// Table rows for a yearly `(year, N_t, C_t)` series in year order.
pub fn qqe_table_from_series(label: &str, series: &[(i32, u64, u64)], unit_band: f64) -> Vec<QqeRow> {
    series
        .iter()
        .enumerate()
        .map(|(i, &(year, n_t, c_t))| QqeRow {
            label: label.to_string(),
            year,
            n_t,
            c_t,
            point: (i > 0).then(|| {
                let (_, n_prev, c_prev) = series[i - 1];
                qqe_point(n_t, n_prev, c_t, c_prev).with_unit_band(unit_band)
            }),
        })
        .collect()
}

/// Full-window elasticity table of a venue, including the baseline year.
pub fn qqe_table(corpus: &Corpus, venue: &str, unit_band: f64) -> Result<Vec<QqeRow>> {
    let aggs = venue_aggregates(corpus, venue)?;
    let series: Vec<_> = aggs.iter().map(|a| (a.year, a.n_t, a.c_t)).collect();
    Ok(qqe_table_from_series(venue, &series, unit_band))
}

/// One point per year from the second window year on.
pub fn qqe_trajectory(corpus: &Corpus, venue: &str, unit_band: f64) -> Result<Vec<QqeRow>> {
    let years = corpus.window().len();
    if years < 2 {
        return Err(Error::InsufficientYears(years));
    }
    let mut rows = qqe_table(corpus, venue, unit_band)?;
    rows.remove(0);
    Ok(rows)
}

/// Mean of the defined annual magnitudes of a trajectory.
pub fn mean_magnitude(rows: &[QqeRow]) -> Option<f64> {
    let values: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.point.and_then(|p| p.qqe_magnitude))
        .collect();
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldQqeMode {
    /// N_t and C_t pooled over all venues.
    #[default]
    Pooled,
    /// Mean of the per-venue magnitudes of the category.
    VenueAveraged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldQqe {
    pub year: i32,
    /// Category papers published in `year`, pooled over venues.
    pub n_t: u64,
    /// Category citation mass in `year`, pooled over venues.
    pub c_t: u64,
    pub qqe: Option<f64>,
}

fn category_series<'a>(
    records: impl Iterator<Item = &'a crate::PaperRecord> + Clone,
    years: impl Iterator<Item = i32>,
) -> Vec<(i32, u64, u64)> {
    years
        .map(|t| {
            let mut n = 0;
            let mut c = 0;
            for r in records.clone() {
                if r.year == t {
                    n += 1;
                }
                if r.year <= t {
                    c += r.citations_in(t);
                }
            }
            (t, n, c)
        })
        .collect()
}

/// Field-level elasticity series of an `ai_category` label, from the second
/// window year on.
pub fn field_qqe(corpus: &Corpus, category: &str, mode: FieldQqeMode) -> Result<Vec<FieldQqe>> {
    let years = corpus.window().len();
    if years < 2 {
        return Err(Error::InsufficientYears(years));
    }
    let in_category = |r: &&crate::PaperRecord| r.ai_category.as_deref() == Some(category);
    if !corpus.records().iter().any(|r| in_category(&r)) {
        return Err(Error::UnknownCategory(category.to_string()));
    }
    let pooled = category_series(corpus.records().iter().filter(in_category), corpus.window().years());
    let pooled_rows = qqe_table_from_series(category, &pooled, DEFAULT_UNIT_BAND);

    let averaged: Option<BTreeMap<i32, f64>> = (mode == FieldQqeMode::VenueAveraged).then(|| {
        let mut per_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
        for venue in corpus.venues_present() {
            let series = category_series(
                corpus
                    .records()
                    .iter()
                    .filter(in_category)
                    .filter(move |r| r.venue == venue),
                corpus.window().years(),
            );
            for row in qqe_table_from_series(venue, &series, DEFAULT_UNIT_BAND) {
                if let Some(m) = row.point.and_then(|p| p.qqe_magnitude) {
                    per_year.entry(row.year).or_default().push(m);
                }
            }
        }
        per_year
            .into_iter()
            .map(|(y, v)| (y, v.iter().sum::<f64>() / v.len() as f64))
            .collect()
    });

    Ok(pooled_rows
        .into_iter()
        .skip(1)
        .map(|row| FieldQqe {
            year: row.year,
            n_t: row.n_t,
            c_t: row.c_t,
            qqe: match &averaged {
                None => row.point.and_then(|p| p.qqe_magnitude),
                Some(avg) => avg.get(&row.year).copied(),
            },
        })
        .collect())
}
