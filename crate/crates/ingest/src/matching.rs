//! Exact title matching under venue and year constraints.

use serde::{Deserialize, Serialize};
use venuepulse_core::corpus::normalize_title;
use venuepulse_core::RawRecord;

/// One official proceedings entry to look up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Query {
    pub title: String,
    pub venue: String,
    pub year: i32,
}

impl Query {
    pub fn new(title: impl Into<String>, venue: impl Into<String>, year: i32) -> Self {
        Self {
            title: title.into(),
            venue: venue.into(),
            year,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchBasis {
    ExactTitleVenueYear,
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    pub proceedings_title: String,
    pub matched: bool,
    pub matched_record: Option<RawRecord>,
    pub match_basis: MatchBasis,
    /// Candidates that passed every constraint (more than one means ambiguous).
    pub survivors: usize,
}

impl MatchResult {
    fn unmatched(title: &str, survivors: usize) -> Self {
        Self {
            proceedings_title: title.to_string(),
            matched: false,
            matched_record: None,
            match_basis: MatchBasis::Unmatched,
            survivors,
        }
    }
}

pub(crate) fn same_venue(a: &str, b: &str) -> bool {
    normalize_title(a) == normalize_title(b)
}

fn row_year(row: &RawRecord) -> Option<i32> {
    let y = row.get("year")?;
    y.parse()
        .ok()
        .or_else(|| y.parse::<f64>().ok().filter(|f| f.fract() == 0.0).map(|f| f as i32))
}

/// Matched iff exactly one candidate has an equal normalized title, the same
/// venue and the same year. Ambiguity is reported, never resolved.
pub fn match_title(proceedings_title: &str, venue: &str, year: i32, candidates: &[RawRecord]) -> MatchResult {
    let want = normalize_title(proceedings_title);
    let survivors: Vec<&RawRecord> = candidates
        .iter()
        .filter(|c| c.get("title").is_some_and(|t| normalize_title(t) == want))
        .filter(|c| c.get("venue").is_some_and(|v| same_venue(v, venue)))
        .filter(|c| row_year(c) == Some(year))
        .collect();
    match survivors.as_slice() {
        [one] => MatchResult {
            proceedings_title: proceedings_title.to_string(),
            matched: true,
            matched_record: Some((*one).clone()),
            match_basis: MatchBasis::ExactTitleVenueYear,
            survivors: 1,
        },
        rest => MatchResult::unmatched(proceedings_title, rest.len()),
    }
}
