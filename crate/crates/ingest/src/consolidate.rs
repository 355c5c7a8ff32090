//! Merging the same paper's rows from two sources.

use serde::Serialize;
use thiserror::Error;
use venuepulse_core::corpus::validate::{ANNUAL_PREFIX, CITATION_COUNT, NOTES, VENUE, YEAR};
use venuepulse_core::RawRecord;

use crate::matching::same_venue;

/// Prefix of the provenance note left on gap-filled rows.
pub const FILLED_NOTE: &str = "filled from supplemental:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsolidateError {
    #[error("rows disagree on {field}: primary {primary:?}, supplemental {supplemental:?}")]
    VenueYearMismatch {
        field: &'static str,
        primary: String,
        supplemental: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Consolidated {
    pub row: RawRecord,
    /// Fields taken from the supplemental row.
    pub filled: Vec<String>,
}

fn fillable(field: &str) -> bool {
    field == CITATION_COUNT || field.starts_with(ANNUAL_PREFIX)
}

/// Primary values win wherever present; the supplemental row only fills an
/// absent cumulative count or absent annual slices. Filled fields are listed
/// in `notes`.
pub fn consolidate(primary: &RawRecord, supplemental: &RawRecord) -> Result<Consolidated, ConsolidateError> {
    let venue_ok = match (primary.get(VENUE), supplemental.get(VENUE)) {
        (Some(a), Some(b)) => same_venue(a, b),
        _ => true,
    };
    if !venue_ok {
        return Err(ConsolidateError::VenueYearMismatch {
            field: VENUE,
            primary: primary.get(VENUE).unwrap_or_default().into(),
            supplemental: supplemental.get(VENUE).unwrap_or_default().into(),
        });
    }
    if let (Some(a), Some(b)) = (primary.get(YEAR), supplemental.get(YEAR)) {
        let parse = |s: &str| s.parse::<f64>().ok();
        if parse(a) != parse(b) || parse(a).is_none() {
            return Err(ConsolidateError::VenueYearMismatch {
                field: YEAR,
                primary: a.into(),
                supplemental: b.into(),
            });
        }
    }

    let mut row = primary.clone();
    let mut filled = Vec::new();
    for (field, value) in supplemental.fields() {
        if fillable(field) && !primary.contains(field) && !value.trim().is_empty() {
            row.set(field, value);
            filled.push(field.to_string());
        }
    }
    if !filled.is_empty() {
        let note = format!("{FILLED_NOTE} {}", filled.join(" "));
        let notes = match primary.get(NOTES) {
            Some(existing) => format!("{existing}; {note}"),
            None => note,
        };
        row.set(NOTES, notes);
    }
    Ok(Consolidated { row, filled })
}
