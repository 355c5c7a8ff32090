use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{normalize_title, PaperRecord, Window};

pub const PAPER_ID: &str = "paperId";
pub const TITLE: &str = "title";
pub const VENUE: &str = "venue";
pub const YEAR: &str = "year";
pub const AI_CATEGORY: &str = "ai_category";
pub const NOTES: &str = "notes";
pub const CITATION_COUNT: &str = "citationCount";
pub const TOP_CONF: &str = "top_conf_citations";
pub const TOP_JOURNAL: &str = "top_journal_citations";
pub const ANNUAL_PREFIX: &str = "citations_";

/// Unvalidated row as read from a file or an API: field name to text value.
///
/// Empty values are treated as absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RawRecord(pub BTreeMap<String, String>);

impl RawRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, field: &str) -> Option<&str> {
        self.0
            .get(field)
            .map(|v| v.trim())
            .filter(|v| !v.is_empty())
    }

    pub fn set(&mut self, field: impl Into<String>, value: impl Into<String>) {
        self.0.insert(field.into(), value.into());
    }

    pub fn with(mut self, field: impl Into<String>, value: impl ToString) -> Self {
        self.set(field, value.to_string());
        self
    }

    pub fn contains(&self, field: &str) -> bool {
        self.get(field).is_some()
    }

    pub fn fields(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Flattens a JSON object; nulls are dropped, scalars are stringified.
    pub fn from_json(value: &Value) -> Option<Self> {
        let obj = value.as_object()?;
        let mut raw = Self::new();
        for (k, v) in obj {
            let text = match v {
                Value::Null => continue,
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                other => other.to_string(),
            };
            raw.set(k.clone(), text);
        }
        Some(raw)
    }

    pub fn to_json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        )
    }
}

/// Parses an annual column name such as `citations_2019`.
pub fn annual_field_year(field: &str) -> Option<i32> {
    let digits = field.strip_prefix(ANNUAL_PREFIX)?;
    if digits.len() == 4 && digits.bytes().all(|b| b.is_ascii_digit()) {
        digits.parse().ok()
    } else {
        None
    }
}

pub fn annual_field(year: i32) -> String {
    format!("{ANNUAL_PREFIX}{year}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("missing required field `{0}`")]
    MissingField(String),
    #[error("field `{field}` is negative ({value})")]
    NegativeCount { field: String, value: String },
    #[error("field `{field}` is not an integer: {value:?}")]
    InvalidNumber { field: String, value: String },
    #[error("year {year} outside window {start}-{end}")]
    YearOutOfWindow { year: i32, start: i32, end: i32 },
    #[error("`{field}` = {value} exceeds citationCount = {total}")]
    InconsistentCounts {
        field: String,
        value: u64,
        total: u64,
    },
}

impl ValidationError {
    /// Name of the offending field.
    pub fn field(&self) -> &str {
        match self {
            Self::MissingField(f) => f,
            Self::NegativeCount { field, .. }
            | Self::InvalidNumber { field, .. }
            | Self::InconsistentCounts { field, .. } => field,
            Self::YearOutOfWindow { .. } => YEAR,
        }
    }
}

fn parse_count(
    raw: &RawRecord,
    field: &str,
    errors: &mut Vec<ValidationError>,
) -> Option<u64> {
    let text = raw.get(field)?;
    match text.parse::<i64>() {
        Ok(v) if v < 0 => {
            errors.push(ValidationError::NegativeCount {
                field: field.to_string(),
                value: text.to_string(),
            });
            None
        }
        Ok(v) => Some(v as u64),
        Err(_) => {
            // Some APIs serialize counts as floats ("12.0").
            match text.parse::<f64>() {
                Ok(f) if f.fract() == 0.0 && f < 0.0 => {
                    errors.push(ValidationError::NegativeCount {
                        field: field.to_string(),
                        value: text.to_string(),
                    });
                    None
                }
                Ok(f) if f.fract() == 0.0 && f.is_finite() => Some(f as u64),
                _ => {
                    errors.push(ValidationError::InvalidNumber {
                        field: field.to_string(),
                        value: text.to_string(),
                    });
                    None
                }
            }
        }
    }
}

/// Validates a raw row into a [`PaperRecord`], collecting every violation.
///
/// Annual slices default to 0 and a missing `citationCount` defaults to the
/// sum of the annual slices. A missing `paperId` is synthesized from the
/// normalized venue/year/title key.
pub fn validate_record(raw: &RawRecord, window: Window) -> Result<PaperRecord, Vec<ValidationError>> {
    let mut errors = Vec::new();

    let title = raw.get(TITLE).map(str::to_string);
    let venue = raw.get(VENUE).map(str::to_string);
    if title.is_none() {
        errors.push(ValidationError::MissingField(TITLE.into()));
    }
    if venue.is_none() {
        errors.push(ValidationError::MissingField(VENUE.into()));
    }
    let year = match raw.get(YEAR) {
        None => {
            errors.push(ValidationError::MissingField(YEAR.into()));
            None
        }
        Some(text) => match text.parse::<i32>() {
            Ok(y) if window.contains(y) => Some(y),
            Ok(y) => {
                errors.push(ValidationError::YearOutOfWindow {
                    year: y,
                    start: window.start,
                    end: window.end,
                });
                None
            }
            Err(_) => {
                errors.push(ValidationError::InvalidNumber {
                    field: YEAR.into(),
                    value: text.to_string(),
                });
                None
            }
        },
    };

    let mut annual = BTreeMap::new();
    for y in window.years() {
        // zero years are left out so every record has one canonical form
        match parse_count(raw, &annual_field(y), &mut errors) {
            Some(v) if v > 0 => {
                annual.insert(y, v);
            }
            _ => {}
        }
    }
    let annual_sum: u64 = annual.values().sum();

    let citation_count = parse_count(raw, CITATION_COUNT, &mut errors);
    let top_conf = parse_count(raw, TOP_CONF, &mut errors).unwrap_or(0);
    let top_journal = parse_count(raw, TOP_JOURNAL, &mut errors).unwrap_or(0);
    let total = citation_count.unwrap_or(annual_sum);

    for (field, value) in [(TOP_CONF, top_conf), (TOP_JOURNAL, top_journal)] {
        if value > total {
            errors.push(ValidationError::InconsistentCounts {
                field: field.into(),
                value,
                total,
            });
        }
    }
    if citation_count.is_some() && annual_sum > total {
        errors.push(ValidationError::InconsistentCounts {
            field: format!("{}..{}", annual_field(window.start), annual_field(window.end)),
            value: annual_sum,
            total,
        });
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let (title, venue, year) = (title.unwrap(), venue.unwrap(), year.unwrap());

    let extra = raw
        .fields()
        .filter(|(k, v)| !is_schema_field(k, window) && !v.trim().is_empty())
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();

    let paper_id = raw
        .get(PAPER_ID)
        .map(str::to_string)
        .unwrap_or_else(|| format!("{}:{}:{}", venue, year, normalize_title(&title)));

    Ok(PaperRecord {
        paper_id,
        title,
        venue,
        year,
        ai_category: raw.get(AI_CATEGORY).map(str::to_string),
        notes: raw.get(NOTES).map(str::to_string),
        citation_count: total,
        top_conf_citations: top_conf,
        top_journal_citations: top_journal,
        annual_citations: annual,
        extra,
    })
}

pub(crate) fn is_schema_field(field: &str, window: Window) -> bool {
    matches!(
        field,
        PAPER_ID | TITLE | VENUE | YEAR | AI_CATEGORY | NOTES | CITATION_COUNT | TOP_CONF | TOP_JOURNAL
    ) || annual_field_year(field).is_some_and(|y| window.contains(y))
}

/// Inverse of [`validate_record`]: every schema field is written explicitly.
pub fn to_raw(record: &PaperRecord) -> RawRecord {
    let mut raw = RawRecord::new()
        .with(PAPER_ID, &record.paper_id)
        .with(TITLE, &record.title)
        .with(VENUE, &record.venue)
        .with(YEAR, record.year)
        .with(CITATION_COUNT, record.citation_count)
        .with(TOP_CONF, record.top_conf_citations)
        .with(TOP_JOURNAL, record.top_journal_citations);
    if let Some(c) = &record.ai_category {
        raw.set(AI_CATEGORY, c.clone());
    }
    if let Some(n) = &record.notes {
        raw.set(NOTES, n.clone());
    }
    for (y, v) in &record.annual_citations {
        raw.set(annual_field(*y), v.to_string());
    }
    for (k, v) in &record.extra {
        raw.set(k.clone(), v.clone());
    }
    raw
}
