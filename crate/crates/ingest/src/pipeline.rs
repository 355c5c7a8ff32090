//! Primary fetch, supplemental fallback, validation and deduplication.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use venuepulse_core::corpus::validate::{
    annual_field, AI_CATEGORY, CITATION_COUNT, NOTES, TOP_CONF, TOP_JOURNAL, VENUE,
};
use venuepulse_core::indicators::TopVenueRegistry;
use venuepulse_core::corpus::{validate_record, CorpusError, ValidationError};
use venuepulse_core::{Corpus, RawRecord, Window};

use crate::client::SourceClient;
use crate::consolidate::consolidate;
use crate::dedup::{deduplicate, DuplicateReport};
use crate::matching::Query;

/// One row of the official proceedings listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProceedingsEntry {
    pub title: String,
    pub venue: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ai_category: Option<String>,
}

impl ProceedingsEntry {
    pub fn query(&self) -> Query {
        Query::new(&self.title, &self.venue, self.year)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("reading proceedings {path}: {source}")]
    Proceedings { path: String, source: csv::Error },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Reads a `title,venue,year[,ai_category]` CSV.
pub fn read_proceedings(path: &Path) -> Result<Vec<ProceedingsEntry>, PipelineError> {
    let err = |source| PipelineError::Proceedings {
        path: path.display().to_string(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(err)?;
    reader.deserialize().collect::<Result<_, _>>().map_err(err)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Coverage {
    pub total: usize,
    pub primary: usize,
    /// Entries matched only by the supplemental source.
    pub supplemental: usize,
    /// Primary matches whose gaps the supplemental source filled.
    pub gap_filled: usize,
    pub unmatched: usize,
}

impl Coverage {
    pub fn primary_share(&self) -> f64 {
        share(self.primary, self.total)
    }

    pub fn supplemental_share(&self) -> f64 {
        share(self.supplemental, self.total)
    }
}

fn share(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub entry: ProceedingsEntry,
    pub reason: String,
}

#[derive(Debug)]
pub struct PipelineOutput {
    pub corpus: Corpus,
    pub coverage: Coverage,
    pub unmatched: Vec<ProceedingsEntry>,
    pub rejected: Vec<Rejection>,
    pub duplicates: Vec<DuplicateReport>,
    pub retries: u32,
}

/// A matched row is incomplete when the cumulative count or any annual
/// slice from the publication year to the window end is absent.
pub fn has_gaps(row: &RawRecord, year: i32, window: Window) -> bool {
    !row.contains(CITATION_COUNT) || (year.max(window.start)..=window.end).any(|y| !row.contains(&annual_field(y)))
}

/// Field listing the venues of citing papers, `;`-separated.
pub const CITING_VENUES: &str = "citing_venues";

/// Fills absent top-venue citation counts from a row's citing venue list.
pub fn derive_top_counts(row: &mut RawRecord, registry: &TopVenueRegistry) -> bool {
    let Some(list) = row.get(CITING_VENUES) else {
        return false;
    };
    if row.contains(TOP_CONF) && row.contains(TOP_JOURNAL) {
        return false;
    }
    let counts = registry.count_top_citations(list.split(';').map(str::trim).filter(|v| !v.is_empty()));
    let (conf, journal) = (counts.conference.to_string(), counts.journal.to_string());
    if !row.contains(TOP_CONF) {
        row.set(TOP_CONF, conf);
    }
    if !row.contains(TOP_JOURNAL) {
        row.set(TOP_JOURNAL, journal);
    }
    true
}

fn describe(errors: &[ValidationError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub async fn run_pipeline(
    primary: &SourceClient,
    supplemental: Option<&SourceClient>,
    entries: &[ProceedingsEntry],
    window: Window,
    registry: Option<&TopVenueRegistry>,
) -> Result<PipelineOutput, PipelineError> {
    let queries: Vec<Query> = entries.iter().map(ProceedingsEntry::query).collect();
    let first = primary.fetch_batch(&queries).await;
    let mut retries = first.retries;
    let mut rejected = Vec::new();

    let mut primary_rows: Vec<Option<RawRecord>> = Vec::with_capacity(entries.len());
    for (entry, outcome) in entries.iter().zip(first.outcomes) {
        match outcome.result {
            Ok(m) => primary_rows.push(m.matched_record),
            Err(e) => {
                log::warn!("primary fetch failed for {:?}: {e}", entry.title);
                primary_rows.push(None);
            }
        }
    }

    let needs: Vec<usize> = (0..entries.len())
        .filter(|&i| match &primary_rows[i] {
            None => true,
            Some(row) => has_gaps(row, entries[i].year, window),
        })
        .collect();
    let mut supplemental_rows: Vec<Option<RawRecord>> = vec![None; entries.len()];
    if let (Some(client), false) = (supplemental, needs.is_empty()) {
        let qs: Vec<Query> = needs.iter().map(|&i| queries[i].clone()).collect();
        let second = client.fetch_batch(&qs).await;
        retries += second.retries;
        for (&i, outcome) in needs.iter().zip(second.outcomes) {
            match outcome.result {
                Ok(m) => supplemental_rows[i] = m.matched_record,
                Err(e) => log::warn!("supplemental fetch failed for {:?}: {e}", entries[i].title),
            }
        }
    }

    let mut coverage = Coverage {
        total: entries.len(),
        ..Default::default()
    };
    let mut unmatched = Vec::new();
    let mut records = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let row = match (primary_rows[i].take(), supplemental_rows[i].take()) {
            (Some(p), Some(s)) => {
                coverage.primary += 1;
                match consolidate(&p, &s) {
                    Ok(c) => {
                        if !c.filled.is_empty() {
                            coverage.gap_filled += 1;
                        }
                        c.row
                    }
                    Err(e) => {
                        log::warn!("not consolidating {:?}: {e}", entry.title);
                        p
                    }
                }
            }
            (Some(p), None) => {
                coverage.primary += 1;
                p
            }
            (None, Some(mut s)) => {
                coverage.supplemental += 1;
                let note = match s.get(NOTES) {
                    Some(n) => format!("{n}; source: supplemental"),
                    None => "source: supplemental".to_string(),
                };
                s.set(NOTES, note);
                s
            }
            (None, None) => {
                coverage.unmatched += 1;
                unmatched.push(entry.clone());
                continue;
            }
        };
        let mut row = row;
        // the match already required venue equality up to normalization
        row.set(VENUE, entry.venue.clone());
        if let Some(registry) = registry {
            derive_top_counts(&mut row, registry);
        }
        if let (None, Some(cat)) = (row.get(AI_CATEGORY), &entry.ai_category) {
            row.set(AI_CATEGORY, cat.clone());
        }
        match validate_record(&row, window) {
            Ok(r) => records.push(r),
            Err(errors) => rejected.push(Rejection {
                entry: entry.clone(),
                reason: describe(&errors),
            }),
        }
    }

    let (mut kept, duplicates) = deduplicate(records);
    let mut ids = BTreeSet::new();
    kept.retain(|r| {
        let fresh = ids.insert(r.paper_id.clone());
        if !fresh {
            rejected.push(Rejection {
                entry: ProceedingsEntry {
                    title: r.title.clone(),
                    venue: r.venue.clone(),
                    year: r.year,
                    ai_category: r.ai_category.clone(),
                },
                reason: format!("paperId {} already used by another entry", r.paper_id),
            });
        }
        fresh
    });
    let corpus = Corpus::from_records(kept, window)?;
    log::info!(
        "ingest: {} entries, {:.1}% primary, {:.1}% supplemental, {} unmatched, {} retries",
        coverage.total,
        coverage.primary_share(),
        coverage.supplemental_share(),
        coverage.unmatched,
        retries
    );
    Ok(PipelineOutput {
        corpus,
        coverage,
        unmatched,
        rejected,
        duplicates,
        retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_counts_from_citing_venues() {
        let registry = TopVenueRegistry::builtin();
        let mut row = RawRecord::new().with(CITING_VENUES, "NIPS; Nature;arXiv; ICML");
        assert!(derive_top_counts(&mut row, &registry));
        assert_eq!(row.get(TOP_CONF), Some("2"));
        assert_eq!(row.get(TOP_JOURNAL), Some("1"));
        let mut given = RawRecord::new().with(CITING_VENUES, "NIPS").with(TOP_CONF, 9).with(TOP_JOURNAL, 0);
        assert!(!derive_top_counts(&mut given, &registry));
        assert_eq!(given.get(TOP_CONF), Some("9"));
    }

    #[test]
    fn gap_detection() {
        let w = Window::new(2019, 2021).unwrap();
        let full = RawRecord::new()
            .with(CITATION_COUNT, 3)
            .with("citations_2020", 1)
            .with("citations_2021", 2);
        assert!(!has_gaps(&full, 2020, w));
        assert!(has_gaps(&full, 2019, w));
        let mut no_total = full.clone();
        no_total.0.remove(CITATION_COUNT);
        assert!(has_gaps(&no_total, 2020, w));
    }
}
