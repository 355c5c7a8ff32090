//! The eight-column elasticity table and golden-file comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use super::QqeRow;
use crate::format::{fixed_or, QQE_DECIMALS, UNDEFINED};

pub const TABLE_HEADER: [&str; 8] = ["Conference", "Year", "N_t", "C_t", "P_t", "g_t", "QQE", "ln(P_t)"];
pub const DEFAULT_GOLDEN_TOLERANCE: f64 = 0.005;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

pub fn write_table<W: Write>(rows: &[QqeRow], out: W) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for r in rows {
        let p = r.point;
        let cell = |v: Option<f64>| fixed_or(v, QQE_DECIMALS, UNDEFINED);
        w.write_record([
            r.label.clone(),
            r.year.to_string(),
            r.n_t.to_string(),
            r.c_t.to_string(),
            cell(p.and_then(|p| p.p_t)),
            cell(p.and_then(|p| p.g_t)),
            cell(p.and_then(|p| p.qqe_signed)),
            cell(p.and_then(|p| p.s_t)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A row of a reference elasticity table; `None` cells were printed as `-`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenRow {
    pub label: String,
    pub year: i32,
    pub n_t: u64,
    pub c_t: u64,
    pub p_t: Option<f64>,
    pub g_t: Option<f64>,
    pub qqe: Option<f64>,
    pub ln_p: Option<f64>,
}

impl GoldenRow {
    pub fn key(&self) -> (&str, i32) {
        (&self.label, self.year)
    }
}

pub fn parse_table<R: Read>(input: R) -> Result<Vec<GoldenRow>, TableError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != TABLE_HEADER {
        return Err(TableError::Malformed {
            line: 1,
            message: format!("expected header {}", TABLE_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = |message: String| TableError::Malformed { line, message };
        let int = |j: usize| -> Result<u64, TableError> {
            rec[j].parse().map_err(|_| bad(format!("{}: not an integer: {:?}", TABLE_HEADER[j], &rec[j])))
        };
        let real = |j: usize| -> Result<Option<f64>, TableError> {
            match &rec[j] {
                "" | UNDEFINED => Ok(None),
                s => s
                    .parse()
                    .map(Some)
                    .map_err(|_| bad(format!("{}: not a number: {s:?}", TABLE_HEADER[j]))),
            }
        };
        rows.push(GoldenRow {
            label: rec[0].to_string(),
            year: rec[1]
                .parse()
                .map_err(|_| bad(format!("Year: not an integer: {:?}", &rec[1])))?,
            n_t: int(2)?,
            c_t: int(3)?,
            p_t: real(4)?,
            g_t: real(5)?,
            qqe: real(6)?,
            ln_p: real(7)?,
        });
    }
    Ok(rows)
}

pub fn read_table(path: &Path) -> Result<Vec<GoldenRow>, TableError> {
    parse_table(std::fs::File::open(path)?)
}

/// One out-of-tolerance cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDeviation {
    pub label: String,
    pub year: i32,
    pub column: &'static str,
    pub expected: Option<f64>,
    pub actual: Option<f64>,
}

impl RowDeviation {
    pub fn deviation(&self) -> Option<f64> {
        Some((self.expected? - self.actual?).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenDiff {
    pub tolerance: f64,
    /// Largest absolute deviation per column over compared, non-flagged rows.
    pub max_abs_deviation: BTreeMap<&'static str, f64>,
    pub failures: Vec<RowDeviation>,
    pub flagged: Vec<(String, i32)>,
    /// Golden rows with no computed counterpart.
    pub missing: Vec<(String, i32)>,
    pub compared_rows: usize,
}

impl GoldenDiff {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.missing.is_empty()
    }

    /// Distinct (label, year) keys with at least one failing cell.
    pub fn failing_rows(&self) -> BTreeSet<(String, i32)> {
        self.failures.iter().map(|f| (f.label.clone(), f.year)).collect()
    }
}

/// Compares computed rows against a golden table cell by cell.
///
/// Integer columns must match exactly; real columns within `tolerance`.
/// A cell defined on one side and undefined on the other is a failure.
/// Rows listed in `flagged` are skipped.
pub fn diff_golden(
    computed: &[QqeRow],
    golden: &[GoldenRow],
    tolerance: f64,
    flagged: &[(String, i32)],
) -> GoldenDiff {
    let by_key: BTreeMap<(&str, i32), &QqeRow> =
        computed.iter().map(|r| ((r.label.as_str(), r.year), r)).collect();
    let mut diff = GoldenDiff {
        tolerance,
        max_abs_deviation: BTreeMap::new(),
        failures: Vec::new(),
        flagged: Vec::new(),
        missing: Vec::new(),
        compared_rows: 0,
    };
    for g in golden {
        if flagged.iter().any(|(l, y)| l == &g.label && *y == g.year) {
            diff.flagged.push((g.label.clone(), g.year));
            continue;
        }
        let Some(row) = by_key.get(&g.key()) else {
            diff.missing.push((g.label.clone(), g.year));
            continue;
        };
        diff.compared_rows += 1;
        let p = row.point;
        let cells: [(&'static str, Option<f64>, Option<f64>, f64); 6] = [
            ("N_t", Some(g.n_t as f64), Some(row.n_t as f64), 0.0),
            ("C_t", Some(g.c_t as f64), Some(row.c_t as f64), 0.0),
            ("P_t", g.p_t, p.and_then(|p| p.p_t), tolerance),
            ("g_t", g.g_t, p.and_then(|p| p.g_t), tolerance),
            ("QQE", g.qqe, p.and_then(|p| p.qqe_signed), tolerance),
            ("ln(P_t)", g.ln_p, p.and_then(|p| p.s_t), tolerance),
        ];
        for (column, expected, actual, tol) in cells {
            let ok = match (expected, actual) {
                (None, None) => true,
                (Some(e), Some(a)) => {
                    let d = (e - a).abs();
                    let slot = diff.max_abs_deviation.entry(column).or_insert(0.0);
                    *slot = slot.max(d);
                    d <= tol + 1e-12
                }
                _ => false,
            };
            if !ok {
                diff.failures.push(RowDeviation {
                    label: g.label.clone(),
                    year: g.year,
                    column,
                    expected,
                    actual,
                });
            }
        }
    }
    diff
}
