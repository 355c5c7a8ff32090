//! Corpus construction from scholarly metadata sources.
//!
//! Each official proceedings entry is looked up in a primary source and
//! matched by exact normalized title under venue and year constraints.
//! Unmatched or incomplete entries fall back to a supplemental source whose
//! values only fill gaps. Matched rows are then validated and deduplicated
//! into a [`venuepulse_core::Corpus`].

pub mod client;
pub mod config;
pub mod consolidate;
pub mod dedup;
pub mod matching;
pub mod pipeline;

pub use client::{BatchReport, FetchError, Priority, QueryOutcome, RateLimiter, RetryPolicy, SourceClient, SourceConfig};
pub use config::IngestConfig;
pub use consolidate::{consolidate, ConsolidateError, Consolidated};
pub use dedup::{deduplicate, DuplicateReport};
pub use matching::{match_title, MatchBasis, MatchResult, Query};
pub use pipeline::{read_proceedings, run_pipeline, Coverage, PipelineError, PipelineOutput, ProceedingsEntry};
