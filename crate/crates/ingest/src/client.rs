//! HTTP client for a scholarly metadata source.
//!
//! A source answers `GET {base}/match?title=..&venue=..&year=..` with either
//! a single flat JSON row, an array of rows, or `{"data": [rows]}`. Each row
//! carries the corpus schema fields (`paperId`, `title`, `venue`, `year`,
//! `citationCount`, `citations_YYYY`, ...). A 404 means "no candidates".

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Duration;

use futures::stream::{self, StreamExt};
use reqwest::StatusCode;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;
use tokio::sync::Mutex;
use tokio::time::Instant;
use venuepulse_core::RawRecord;

use crate::matching::{match_title, MatchResult, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Priority {
    #[default]
    Primary,
    Supplemental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    /// Delay before retry k (1-based) is `backoff_base_ms * 2^(k-1)`.
    pub backoff_base_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            backoff_base_ms: 500,
        }
    }
}

impl RetryPolicy {
    pub fn delay_before(&self, retry: u32) -> Duration {
        Duration::from_millis(self.backoff_base_ms.saturating_mul(1u64 << (retry - 1).min(16)))
    }
}

/// Connection settings of one source, as they appear in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub base_endpoint: String,
    #[serde(default = "default_rps")]
    pub requests_per_second: u32,
    #[serde(default)]
    pub retry: RetryPolicy,
    #[serde(default)]
    pub priority: Priority,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_key: Option<String>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    /// Queries in flight at once; the rate limit still applies.
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
}

fn default_rps() -> u32 {
    1
}
fn default_timeout_ms() -> u64 {
    10_000
}
fn default_concurrency() -> usize {
    4
}

impl SourceConfig {
    pub fn new(base_endpoint: impl Into<String>) -> Self {
        Self {
            base_endpoint: base_endpoint.into(),
            requests_per_second: default_rps(),
            retry: RetryPolicy::default(),
            priority: Priority::Primary,
            api_key: None,
            timeout_ms: default_timeout_ms(),
            concurrency: default_concurrency(),
        }
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid source configuration: {0}")]
    Config(String),
    #[error("endpoint unreachable after {attempts} attempt(s): {last_error}")]
    EndpointUnreachable { attempts: u32, last_error: String },
    #[error("request rejected with HTTP {0}")]
    Rejected(u16),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
}

/// Sliding one-second window: at most `limit` acquisitions in any span of
/// one second.
#[derive(Debug)]
pub struct RateLimiter {
    limit: usize,
    window: Duration,
    issued: Mutex<VecDeque<Instant>>,
}

impl RateLimiter {
    pub fn per_second(limit: u32) -> Self {
        Self::new(limit, Duration::from_secs(1))
    }

    pub fn new(limit: u32, window: Duration) -> Self {
        Self {
            limit: limit.max(1) as usize,
            window,
            issued: Mutex::new(VecDeque::new()),
        }
    }

    /// Waits for a slot and returns the instant it was granted.
    pub async fn acquire(&self) -> Instant {
        loop {
            let wait = {
                let mut issued = self.issued.lock().await;
                let now = Instant::now();
                while issued.front().is_some_and(|&t| now.duration_since(t) >= self.window) {
                    issued.pop_front();
                }
                if issued.len() < self.limit {
                    issued.push_back(now);
                    return now;
                }
                self.window - now.duration_since(issued[0])
            };
            tokio::time::sleep(wait).await;
        }
    }
}

/// Result of one query within a batch.
#[derive(Debug)]
pub struct QueryOutcome {
    pub query: Query,
    pub result: Result<MatchResult, FetchError>,
    /// HTTP requests issued for this query, retries included.
    pub attempts: u32,
}

#[derive(Debug, Default)]
pub struct BatchReport {
    /// In query order.
    pub outcomes: Vec<QueryOutcome>,
    pub retries: u32,
}

impl BatchReport {
    pub fn matched(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(&o.result, Ok(m) if m.matched))
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct SourceClient {
    config: SourceConfig,
    http: reqwest::Client,
    limiter: Arc<RateLimiter>,
    issued: Arc<std::sync::Mutex<Vec<Instant>>>,
}

enum Attempt {
    Done(Result<Vec<RawRecord>, FetchError>),
    Retry(String),
}

impl SourceClient {
    pub fn new(config: SourceConfig) -> Result<Self, FetchError> {
        if config.requests_per_second == 0 {
            return Err(FetchError::Config("requests_per_second must be > 0".into()));
        }
        if config.retry.max_attempts == 0 {
            return Err(FetchError::Config("max_attempts must be >= 1".into()));
        }
        reqwest::Url::parse(&config.base_endpoint)
            .map_err(|e| FetchError::Config(format!("base_endpoint: {e}")))?;
        let http = reqwest::Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms))
            .build()
            .map_err(|e| FetchError::Config(e.to_string()))?;
        let limiter = Arc::new(RateLimiter::per_second(config.requests_per_second));
        Ok(Self {
            config,
            http,
            limiter,
            issued: Arc::default(),
        })
    }

    pub fn config(&self) -> &SourceConfig {
        &self.config
    }

    pub fn priority(&self) -> Priority {
        self.config.priority
    }

    /// Send times of every request issued so far.
    pub fn issued_at(&self) -> Vec<Instant> {
        self.issued.lock().expect("issue log poisoned").clone()
    }

    fn url(&self) -> String {
        format!("{}/match", self.config.base_endpoint.trim_end_matches('/'))
    }

    async fn attempt(&self, q: &Query) -> Attempt {
        let granted = self.limiter.acquire().await;
        self.issued.lock().expect("issue log poisoned").push(granted);
        let mut req = self.http.get(self.url()).query(&[
            ("title", q.title.as_str()),
            ("venue", q.venue.as_str()),
            ("year", &q.year.to_string()),
        ]);
        if let Some(key) = &self.config.api_key {
            req = req.header("x-api-key", key);
        }
        let resp = match req.send().await {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status();
        if status == StatusCode::NOT_FOUND {
            return Attempt::Done(Ok(Vec::new()));
        }
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Attempt::Retry(format!("HTTP {status}"));
        }
        if !status.is_success() {
            return Attempt::Done(Err(FetchError::Rejected(status.as_u16())));
        }
        match resp.bytes().await {
            Ok(body) => Attempt::Done(parse_candidates(&body)),
            Err(e) => Attempt::Retry(e.to_string()),
        }
    }

    /// Candidate rows for one query, retrying transient failures.
    pub async fn fetch_candidates(&self, q: &Query) -> (Result<Vec<RawRecord>, FetchError>, u32) {
        let policy = self.config.retry;
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.attempt(q).await {
                Attempt::Done(r) => return (r, attempts),
                Attempt::Retry(err) if attempts >= policy.max_attempts => {
                    return (
                        Err(FetchError::EndpointUnreachable {
                            attempts,
                            last_error: err,
                        }),
                        attempts,
                    )
                }
                Attempt::Retry(err) => {
                    log::warn!(
                        "retrying {:?} ({} {}) after attempt {attempts}: {err}",
                        q.title,
                        q.venue,
                        q.year
                    );
                    tokio::time::sleep(policy.delay_before(attempts)).await;
                }
            }
        }
    }

    pub async fn fetch_one(&self, q: &Query) -> QueryOutcome {
        let (candidates, attempts) = self.fetch_candidates(q).await;
        QueryOutcome {
            query: q.clone(),
            result: candidates.map(|c| match_title(&q.title, &q.venue, q.year, &c)),
            attempts,
        }
    }

    /// Runs every query, at most one matched row each. Failures are reported
    /// per query and never abort the batch.
    pub async fn fetch_batch(&self, queries: &[Query]) -> BatchReport {
        let outcomes: Vec<QueryOutcome> = stream::iter(queries)
            .map(|q| self.fetch_one(q))
            .buffered(self.config.concurrency.max(1))
            .collect()
            .await;
        let retries = outcomes.iter().map(|o| o.attempts.saturating_sub(1)).sum();
        BatchReport { outcomes, retries }
    }
}

/// Accepts a row object, an array of rows, or `{"data": [rows]}`. Each row
/// must be a flat object with a `title`.
pub fn parse_candidates(body: &[u8]) -> Result<Vec<RawRecord>, FetchError> {
    let value: Value =
        serde_json::from_slice(body).map_err(|e| FetchError::MalformedResponse(e.to_string()))?;
    let rows = match value {
        Value::Array(rows) => rows,
        Value::Object(ref obj) if obj.contains_key("data") => match &obj["data"] {
            Value::Array(rows) => rows.clone(),
            Value::Null => Vec::new(),
            _ => return Err(FetchError::MalformedResponse("`data` is not an array".into())),
        },
        obj @ Value::Object(_) => vec![obj],
        _ => return Err(FetchError::MalformedResponse("expected an object or array".into())),
    };
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let raw = RawRecord::from_json(row)
                .ok_or_else(|| FetchError::MalformedResponse(format!("row {i} is not an object")))?;
            if !raw.contains("title") {
                return Err(FetchError::MalformedResponse(format!("row {i} has no title")));
            }
            Ok(raw)
        })
        .collect()
}
