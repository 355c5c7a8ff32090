//! Canonical top-tier conference and journal names with their aliases.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUILTIN: &str = include_str!("../../data/registry.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TopVenueKind {
    Conference,
    Journal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenueEntry {
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegistryFile {
    top_conferences: Vec<VenueEntry>,
    top_journals: Vec<VenueEntry>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry: {0}")]
    Io(#[from] std::io::Error),
    #[error("registry: {0}")]
    Json(#[from] serde_json::Error),
    #[error("registry: `{alias}` maps to both `{first}` and `{second}`")]
    AmbiguousAlias {
        alias: String,
        first: String,
        second: String,
    },
}

fn normalize(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Top-tier venue lists used by the prestige dimension.
#[derive(Debug, Clone)]
pub struct TopVenueRegistry {
    conferences: Vec<VenueEntry>,
    journals: Vec<VenueEntry>,
    lookup: HashMap<String, (usize, TopVenueKind)>,
}

impl TopVenueRegistry {
    pub fn new(conferences: Vec<VenueEntry>, journals: Vec<VenueEntry>) -> Result<Self, RegistryError> {
        let mut lookup: HashMap<String, (usize, TopVenueKind)> = HashMap::new();
        for (kind, entries) in [(TopVenueKind::Conference, &conferences), (TopVenueKind::Journal, &journals)] {
            for (i, e) in entries.iter().enumerate() {
                for alias in std::iter::once(&e.name).chain(&e.aliases) {
                    let key = normalize(alias);
                    if let Some(&(j, k)) = lookup.get(&key) {
                        let other = match k {
                            TopVenueKind::Conference => &conferences[j].name,
                            TopVenueKind::Journal => &journals[j].name,
                        };
                        if (j, k) != (i, kind) {
                            return Err(RegistryError::AmbiguousAlias {
                                alias: alias.clone(),
                                first: other.clone(),
                                second: e.name.clone(),
                            });
                        }
                    }
                    lookup.insert(key, (i, kind));
                }
            }
        }
        Ok(Self {
            conferences,
            journals,
            lookup,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, RegistryError> {
        let file: RegistryFile = serde_json::from_str(text)?;
        Self::new(file.top_conferences, file.top_journals)
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The default lists: CCF-A / CORE A* conferences plus Nature and Science.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("builtin registry is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RegistryFile {
            top_conferences: self.conferences.clone(),
            top_journals: self.journals.clone(),
        })
        .expect("registry serializes")
    }

    /// Canonical name and kind of a venue string, if it is top-tier.
    /// Matching is case-insensitive and whitespace-tolerant.
    pub fn canonicalize(&self, venue: &str) -> Option<(&str, TopVenueKind)> {
        let &(i, kind) = self.lookup.get(&normalize(venue))?;
        let name = match kind {
            TopVenueKind::Conference => &self.conferences[i].name,
            TopVenueKind::Journal => &self.journals[i].name,
        };
        Some((name, kind))
    }

    pub fn conferences(&self) -> impl Iterator<Item = &str> {
        self.conferences.iter().map(|e| e.name.as_str())
    }

    pub fn journals(&self) -> impl Iterator<Item = &str> {
        self.journals.iter().map(|e| e.name.as_str())
    }

    /// Tallies top-conference and top-journal citations from the venue
    /// strings of citing papers.
    pub fn count_top_citations<'a, I>(&self, citing_venues: I) -> TopCitationCounts
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut counts = TopCitationCounts::default();
        for v in citing_venues {
            match self.canonicalize(v) {
                Some((name, TopVenueKind::Conference)) => {
                    counts.conference += 1;
                    *counts.by_venue.entry(name.to_string()).or_default() += 1;
                }
                Some((name, TopVenueKind::Journal)) => {
                    counts.journal += 1;
                    *counts.by_venue.entry(name.to_string()).or_default() += 1;
                }
                None => {}
            }
        }
        counts
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopCitationCounts {
    pub conference: u64,
    pub journal: u64,
    pub by_venue: BTreeMap<String, u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lists() {
        let r = TopVenueRegistry::builtin();
        assert_eq!(r.conferences().count(), 32);
        assert_eq!(r.journals().collect::<Vec<_>>(), vec!["Nature", "Science"]);
        assert_eq!(r.canonicalize("NIPS"), Some(("NeurIPS", TopVenueKind::Conference)));
        assert_eq!(r.canonicalize("  usenix   security "), Some(("USENIX Security", TopVenueKind::Conference)));
        assert_eq!(r.canonicalize("Oakland"), Some(("S&P", TopVenueKind::Conference)));
        assert_eq!(r.canonicalize("nature"), Some(("Nature", TopVenueKind::Journal)));
        assert_eq!(r.canonicalize("NAACL"), None);
    }

    #[test]
    fn ambiguous_alias_rejected() {
        let a = VenueEntry { name: "A".into(), aliases: vec!["x".into()] };
        let b = VenueEntry { name: "B".into(), aliases: vec!["X".into()] };
        assert!(matches!(
            TopVenueRegistry::new(vec![a, b], vec![]),
            Err(RegistryError::AmbiguousAlias { .. })
        ));
    }

    #[test]
    fn counts_citing_venues() {
        let r = TopVenueRegistry::builtin();
        let c = r.count_top_citations(["NIPS", "NeurIPS", "Science", "arXiv", "ACL"]);
        assert_eq!((c.conference, c.journal), (3, 1));
        assert_eq!(c.by_venue["NeurIPS"], 2);
    }

    #[test]
    fn json_round_trip() {
        let r = TopVenueRegistry::builtin();
        let again = TopVenueRegistry::from_json(&r.to_json()).unwrap();
        assert_eq!(again.conferences().collect::<Vec<_>>(), r.conferences().collect::<Vec<_>>());
    }
}
