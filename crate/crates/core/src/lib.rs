//! Conference-level bibliometric indicators.
//!
//! The crate ingests a per-paper citation ledger ([`corpus`]), aggregates it
//! per venue and year, and computes:
//!
//! - scale, influence and prestige indicators ([`indicators`]),
//! - quality-quantity elasticity trajectories and regimes ([`elasticity`]),
//! - Spearman rank correlation with t-approximated p-values ([`stats`]).
//!
//! [`report`] assembles the per-venue summary row and [`format`] holds the
//! fixed-precision rendering shared by every exporter.

pub mod corpus;
pub mod elasticity;
mod error;
pub mod format;
pub mod indicators;
pub mod quantile;
pub mod report;
pub mod stats;

pub use corpus::{
    citation_vector, venue_aggregates, venue_year_aggregate, Corpus, CorpusError, PaperRecord,
    RawRecord, ValidationError, VenueYearAggregate, Window, WindowMode,
};
pub use error::{Error, Result};

/// The seven venues of the reference study, in report order.
pub const DEFAULT_VENUES: [&str; 7] = ["ACL", "EMNLP", "NAACL", "AAAI", "IJCAI", "ICLR", "NeurIPS"];
