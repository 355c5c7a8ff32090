//! Paper records, the validated corpus, and venue/year aggregation.

mod aggregate;
pub mod io;
pub mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aggregate::{
    citation_vector, cohort_vector, venue_aggregates, venue_year_aggregate, VenueYearAggregate,
    WindowMode,
};
pub use validate::{annual_field, annual_field_year, to_raw, validate_record, RawRecord, ValidationError};
pub use io::{load_corpus, persist_corpus, read_raw, CorpusFileError, FileFormat};

/// Inclusive range of publication/citation years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: i32,
    pub end: i32,
}

impl Window {
    pub fn new(start: i32, end: i32) -> Result<Self, CorpusError> {
        if start > end {
            return Err(CorpusError::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn years(&self) -> impl DoubleEndedIterator<Item = i32> + Clone {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for Window {
    fn default() -> Self {
        Self {
            start: 2014,
            end: 2024,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// One publication with its cumulative and per-year citation counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub title: String,
    pub venue: String,
    pub year: i32,
    pub ai_category: Option<String>,
    pub notes: Option<String>,
    pub citation_count: u64,
    pub top_conf_citations: u64,
    pub top_journal_citations: u64,
    /// Incremental citations received in each calendar year of the window.
    pub annual_citations: BTreeMap<i32, u64>,
    /// Columns outside the schema, kept so files round-trip.
    pub extra: BTreeMap<String, String>,
}

impl PaperRecord {
    pub fn citations_in(&self, year: i32) -> u64 {
        self.annual_citations.get(&year).copied().unwrap_or(0)
    }

    pub fn dedup_key(&self) -> DedupKey {
        DedupKey::new(&self.title, &self.venue, self.year)
    }
}

/// Lowercases, collapses whitespace runs and strips trailing punctuation.
pub fn normalize_title(title: &str) -> String {
    let collapsed = title
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    collapsed
        .trim_end_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace())
        .to_string()
}

/// Normalized (title, venue, year) identity used for deduplication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DedupKey {
    pub title: String,
    pub venue: String,
    pub year: i32,
}

impl DedupKey {
    pub fn new(title: &str, venue: &str, year: i32) -> Self {
        Self {
            title: normalize_title(title),
            venue: venue.trim().to_string(),
            year,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("invalid window {start}-{end}")]
    InvalidWindow { start: i32, end: i32 },
    #[error("duplicate paperId `{0}`")]
    DuplicatePaperId(String),
    #[error("records `{first}` and `{second}` share title/venue/year ({venue} {year})")]
    DuplicateKey {
        first: String,
        second: String,
        venue: String,
        year: i32,
    },
    #[error("record `{paper_id}` has year {year} outside window {window}")]
    YearOutOfWindow {
        paper_id: String,
        year: i32,
        window: Window,
    },
}

/// Validated, deduplicated collection of records, indexed by venue and year.
///
/// Records are kept sorted by (venue, year, paper_id) so that every derived
/// output is independent of insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<PaperRecord>,
    venue_index: BTreeMap<String, BTreeMap<i32, Vec<usize>>>,
    venues: BTreeSet<String>,
    window: Window,
}

impl Corpus {
    pub fn empty(window: Window) -> Self {
        Self {
            records: Vec::new(),
            venue_index: BTreeMap::new(),
            venues: BTreeSet::new(),
            window,
        }
    }

    pub fn from_records(
        mut records: Vec<PaperRecord>,
        window: Window,
    ) -> Result<Self, CorpusError> {
        records.sort_by(|a, b| {
            (&a.venue, a.year, &a.paper_id).cmp(&(&b.venue, b.year, &b.paper_id))
        });

        let mut ids = BTreeSet::new();
        let mut keys: BTreeMap<DedupKey, &str> = BTreeMap::new();
        for record in &records {
            if !window.contains(record.year) {
                return Err(CorpusError::YearOutOfWindow {
                    paper_id: record.paper_id.clone(),
                    year: record.year,
                    window,
                });
            }
            if !ids.insert(record.paper_id.as_str()) {
                return Err(CorpusError::DuplicatePaperId(record.paper_id.clone()));
            }
            let key = record.dedup_key();
            if let Some(first) = keys.get(&key) {
                return Err(CorpusError::DuplicateKey {
                    first: first.to_string(),
                    second: record.paper_id.clone(),
                    venue: key.venue,
                    year: key.year,
                });
            }
            keys.insert(key, &record.paper_id);
        }

        let mut venue_index: BTreeMap<String, BTreeMap<i32, Vec<usize>>> = BTreeMap::new();
        for (i, record) in records.iter().enumerate() {
            venue_index
                .entry(record.venue.clone())
                .or_default()
                .entry(record.year)
                .or_default()
                .push(i);
        }
        let venues = venue_index.keys().cloned().collect();

        Ok(Self {
            records,
            venue_index,
            venues,
            window,
        })
    }

    /// Registers venues that are valid query targets even without records
    /// (an empty venue aggregates to zeros instead of `UnknownVenue`).
    pub fn with_known_venues<I, S>(mut self, venues: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.venues.extend(venues.into_iter().map(Into::into));
        self
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Venues that have at least one record, in sorted order.
    pub fn venues_present(&self) -> impl Iterator<Item = &str> {
        self.venue_index.keys().map(String::as_str)
    }

    pub fn is_known_venue(&self, venue: &str) -> bool {
        self.venues.contains(venue)
    }

    /// All records of a venue.
    pub fn venue_records(
        &self,
        venue: &str,
    ) -> crate::Result<impl Iterator<Item = &PaperRecord> + '_> {
        if !self.is_known_venue(venue) {
            return Err(crate::Error::UnknownVenue(venue.to_string()));
        }
        let by_year = self.venue_index.get(venue);
        Ok(by_year
            .into_iter()
            .flat_map(|years| years.values())
            .flatten()
            .map(move |&i| &self.records[i]))
    }

    /// Records of a venue published in `year`.
    pub fn venue_year_records(
        &self,
        venue: &str,
        year: i32,
    ) -> crate::Result<impl Iterator<Item = &PaperRecord> + '_> {
        if !self.is_known_venue(venue) {
            return Err(crate::Error::UnknownVenue(venue.to_string()));
        }
        let ids = self
            .venue_index
            .get(venue)
            .and_then(|years| years.get(&year));
        Ok(ids.into_iter().flatten().map(move |&i| &self.records[i]))
    }

    /// Distinct `ai_category` labels in sorted order.
    pub fn categories(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .filter_map(|r| r.ai_category.as_deref())
            .collect()
    }

    pub fn into_records(self) -> Vec<PaperRecord> {
        self.records
    }
}
