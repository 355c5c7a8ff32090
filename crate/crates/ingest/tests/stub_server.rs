//! Client and pipeline behavior against a local scripted source.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::{Query as QueryParams, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::{json, Value};
use venuepulse_core::Window;
use venuepulse_ingest::{
    run_pipeline, FetchError, ProceedingsEntry, Query, RetryPolicy, SourceClient, SourceConfig,
};

#[derive(Default)]
struct Stub {
    rows: Vec<Value>,
    /// The first `fail_first` requests get a 503.
    fail_first: usize,
    malformed: bool,
    hits: AtomicUsize,
    titles: Mutex<Vec<String>>,
}

async fn handle(State(stub): State<Arc<Stub>>, QueryParams(q): QueryParams<HashMap<String, String>>) -> Response {
    let n = stub.hits.fetch_add(1, Ordering::SeqCst);
    stub.titles.lock().unwrap().push(q.get("title").cloned().unwrap_or_default());
    if n < stub.fail_first {
        return StatusCode::SERVICE_UNAVAILABLE.into_response();
    }
    if stub.malformed {
        return "<html>oops</html>".into_response();
    }
    let title = q.get("title").cloned().unwrap_or_default();
    let data: Vec<Value> = stub
        .rows
        .iter()
        .filter(|r| r["title"].as_str().is_some_and(|t| t.eq_ignore_ascii_case(&title)))
        .cloned()
        .collect();
    Json(json!({ "data": data })).into_response()
}

async fn serve(stub: Stub) -> (String, Arc<Stub>) {
    let stub = Arc::new(stub);
    let app = Router::new().route("/match", get(handle)).with_state(stub.clone());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    (format!("http://{addr}"), stub)
}

fn config(endpoint: &str, rps: u32) -> SourceConfig {
    let mut c = SourceConfig::new(endpoint);
    c.requests_per_second = rps;
    c.retry = RetryPolicy {
        max_attempts: 3,
        backoff_base_ms: 10,
    };
    c.timeout_ms = 2_000;
    c
}

fn row(title: &str, venue: &str, year: i32, count: u64) -> Value {
    json!({
        "paperId": format!("id-{}", title.to_lowercase().replace(' ', "-")),
        "title": title,
        "venue": venue,
        "year": year,
        "citationCount": count,
        "citations_2020": count / 2,
        "citations_2021": count - count / 2,
    })
}

fn queries() -> Vec<Query> {
    vec![
        Query::new("Alpha Paper", "ACL", 2020),
        Query::new("Beta Paper", "ACL", 2020),
        Query::new("Gamma Paper", "EMNLP", 2020),
    ]
}

#[tokio::test]
async fn empty_batch_is_empty() {
    let client = SourceClient::new(config("http://127.0.0.1:9", 10)).unwrap();
    let report = client.fetch_batch(&[]).await;
    assert!(report.outcomes.is_empty());
}

#[tokio::test]
async fn one_transient_failure_is_retried() {
    let (url, stub) = serve(Stub {
        rows: vec![
            row("Alpha Paper", "ACL", 2020, 10),
            row("Beta Paper", "ACL", 2020, 4),
            row("Gamma Paper", "EMNLP", 2020, 8),
        ],
        fail_first: 1,
        ..Default::default()
    })
    .await;
    let client = SourceClient::new(config(&url, 50)).unwrap();
    let report = client.fetch_batch(&queries()).await;
    assert_eq!(report.outcomes.len(), 3);
    assert_eq!(report.matched(), 3);
    assert_eq!(report.retries, 1);
    assert_eq!(stub.hits.load(Ordering::SeqCst), 4);
    // order is preserved
    let titles: Vec<_> = report.outcomes.iter().map(|o| o.query.title.as_str()).collect();
    assert_eq!(titles, ["Alpha Paper", "Beta Paper", "Gamma Paper"]);
}

#[tokio::test]
async fn persistent_failure_surfaces_per_query() {
    let (url, stub) = serve(Stub {
        fail_first: usize::MAX,
        ..Default::default()
    })
    .await;
    let client = SourceClient::new(config(&url, 100)).unwrap();
    let report = client.fetch_batch(&queries()).await;
    assert_eq!(report.outcomes.len(), 3);
    for o in &report.outcomes {
        assert!(matches!(o.result, Err(FetchError::EndpointUnreachable { attempts: 3, .. })));
    }
    assert_eq!(stub.hits.load(Ordering::SeqCst), 9);
}

#[tokio::test]
async fn unreachable_endpoint() {
    // port 9 (discard) is closed on loopback
    let client = SourceClient::new(config("http://127.0.0.1:9", 100)).unwrap();
    let report = client.fetch_batch(&queries()[..1]).await;
    assert!(matches!(report.outcomes[0].result, Err(FetchError::EndpointUnreachable { .. })));
}

#[tokio::test]
async fn malformed_body_is_not_retried() {
    let (url, stub) = serve(Stub {
        malformed: true,
        ..Default::default()
    })
    .await;
    let client = SourceClient::new(config(&url, 100)).unwrap();
    let report = client.fetch_batch(&queries()[..1]).await;
    assert!(matches!(report.outcomes[0].result, Err(FetchError::MalformedResponse(_))));
    assert_eq!(stub.hits.load(Ordering::SeqCst), 1);
}

#[tokio::test]
async fn wrong_venue_rows_are_never_attached() {
    let (url, _) = serve(Stub {
        rows: vec![row("Alpha Paper", "EMNLP", 2020, 10), row("Beta Paper", "ACL", 2019, 3)],
        ..Default::default()
    })
    .await;
    let client = SourceClient::new(config(&url, 100)).unwrap();
    let report = client.fetch_batch(&queries()[..2]).await;
    for o in &report.outcomes {
        assert!(!o.result.as_ref().unwrap().matched);
    }
}

#[tokio::test]
async fn rate_limit_holds_over_every_second() {
    const LIMIT: u32 = 4;
    let (url, stub) = serve(Stub::default()).await;
    let mut c = config(&url, LIMIT);
    c.concurrency = 8;
    let client = SourceClient::new(c).unwrap();
    let qs: Vec<Query> = (0..10).map(|i| Query::new(format!("T{i}"), "ACL", 2020)).collect();
    client.fetch_batch(&qs).await;
    let issued = client.issued_at();
    assert_eq!(issued.len(), 10);
    assert_eq!(stub.hits.load(Ordering::SeqCst), 10);
    for &start in &issued {
        let in_span = issued
            .iter()
            .filter(|&&t| t >= start && t.duration_since(start) < Duration::from_secs(1))
            .count();
        assert!(in_span <= LIMIT as usize, "{in_span} requests within one second");
    }
    // 10 requests at 4/s need at least two full windows
    let span = *issued.iter().max().unwrap() - *issued.iter().min().unwrap();
    assert!(span >= Duration::from_secs(2));
}

#[tokio::test]
async fn pipeline_uses_supplemental_for_gaps_and_misses() {
    let mut gappy = row("Beta Paper", "ACL", 2020, 6);
    gappy.as_object_mut().unwrap().remove("citations_2021");
    let (primary_url, _) = serve(Stub {
        rows: vec![row("Alpha Paper", "ACL", 2020, 10), gappy],
        ..Default::default()
    })
    .await;
    let (supp_url, supp) = serve(Stub {
        rows: vec![
            row("Beta Paper", "ACL", 2020, 6),
            row("Gamma Paper", "EMNLP", 2020, 8),
        ],
        ..Default::default()
    })
    .await;
    let primary = SourceClient::new(config(&primary_url, 100)).unwrap();
    let supplemental = SourceClient::new(config(&supp_url, 100)).unwrap();
    let mut entries: Vec<ProceedingsEntry> = queries()
        .into_iter()
        .map(|q| ProceedingsEntry {
            title: q.title,
            venue: q.venue,
            year: q.year,
            ai_category: Some("NLP".into()),
        })
        .collect();
    entries.push(ProceedingsEntry {
        title: "Delta Paper".into(),
        venue: "ACL".into(),
        year: 2021,
        ai_category: None,
    });
    let window = Window::new(2020, 2021).unwrap();
    let out = run_pipeline(&primary, Some(&supplemental), &entries, window, None).await.unwrap();

    assert_eq!(out.coverage.total, 4);
    assert_eq!(out.coverage.primary, 2);
    assert_eq!(out.coverage.supplemental, 1);
    assert_eq!(out.coverage.gap_filled, 1);
    assert_eq!(out.coverage.unmatched, 1);
    assert_eq!(out.unmatched[0].title, "Delta Paper");
    // only the gappy and missing entries go to the supplemental source
    let mut asked = supp.titles.lock().unwrap().clone();
    asked.sort();
    assert_eq!(asked, ["Beta Paper", "Delta Paper", "Gamma Paper"]);

    assert!(out.rejected.is_empty(), "{:?}", out.rejected);
    let records = out.corpus.records();
    assert_eq!(records.len(), 3);
    let beta = records.iter().find(|r| r.title == "Beta Paper").unwrap();
    assert_eq!(beta.citation_count, 6, "primary cumulative count wins");
    assert_eq!(beta.citations_in(2021), 3, "gap filled from supplemental");
    assert!(beta.notes.as_deref().unwrap().contains("citations_2021"));
    let gamma = records.iter().find(|r| r.title == "Gamma Paper").unwrap();
    assert_eq!(gamma.notes.as_deref(), Some("source: supplemental"));
    assert_eq!(gamma.ai_category.as_deref(), Some("NLP"));
}
