//! Duplicate removal over normalized (title, venue, year).

use std::collections::BTreeMap;

use serde::Serialize;
use venuepulse_core::corpus::DedupKey;
use venuepulse_core::PaperRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DuplicateReport {
    pub key: DedupKey,
    pub survivor: String,
    pub removed: Vec<String>,
}

/// Keeps one record per key: highest `citation_count`, then smallest
/// `paper_id`. Output is sorted by (venue, year, paper_id), so the result
/// does not depend on input order.
pub fn deduplicate(records: Vec<PaperRecord>) -> (Vec<PaperRecord>, Vec<DuplicateReport>) {
    let mut groups: BTreeMap<DedupKey, Vec<PaperRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.dedup_key()).or_default().push(r);
    }
    let mut kept = Vec::with_capacity(groups.len());
    let mut reports = Vec::new();
    for (key, mut group) in groups {
        group.sort_by(|a, b| {
            b.citation_count
                .cmp(&a.citation_count)
                .then_with(|| a.paper_id.cmp(&b.paper_id))
                // identical ids: fall back to full content for a total order
                .then_with(|| format!("{a:?}").cmp(&format!("{b:?}")))
        });
        let mut it = group.into_iter();
        let survivor = it.next().expect("groups are non-empty");
        let removed: Vec<String> = it.map(|r| r.paper_id).collect();
        if !removed.is_empty() {
            log::info!("dedup {:?}: kept {}, removed {:?}", key, survivor.paper_id, removed);
            reports.push(DuplicateReport {
                key,
                survivor: survivor.paper_id.clone(),
                removed,
            });
        }
        kept.push(survivor);
    }
    kept.sort_by(|a, b| (&a.venue, a.year, &a.paper_id).cmp(&(&b.venue, b.year, &b.paper_id)));
    (kept, reports)
}
