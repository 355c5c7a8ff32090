use anyhow::{Context, Result};
use serde::Serialize;
use venuepulse_core::corpus::persist_corpus;
use venuepulse_core::indicators::TopVenueRegistry;
use venuepulse_ingest::{read_proceedings, run_pipeline, Coverage, DuplicateReport, PipelineError, ProceedingsEntry, SourceClient};

use crate::config::{OutputFormat, RunConfig};
use crate::exit::{schema, usage};
use crate::output::Output;

#[derive(Serialize)]
struct IngestReport<'a> {
    coverage: &'a Coverage,
    primary_share_percent: f64,
    supplemental_share_percent: f64,
    retries: u32,
    unmatched: &'a [ProceedingsEntry],
    rejected: &'a [venuepulse_ingest::pipeline::Rejection],
    duplicates: &'a [DuplicateReport],
}

pub fn run(config: &RunConfig) -> Result<()> {
    let mut ingest = config
        .ingest
        .clone()
        .ok_or_else(|| usage("the config has no `ingest` section"))?;
    ingest.apply_env();
    let entries = read_proceedings(&ingest.proceedings_path).map_err(|e| match &e {
        PipelineError::Proceedings { source, .. } if source.is_io_error() => usage(e.to_string()),
        _ => schema(e.to_string()),
    })?;
    if entries.is_empty() {
        return Err(usage("the proceedings listing is empty").into());
    }
    let registry = match &config.registry_path {
        Some(p) => TopVenueRegistry::load(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => TopVenueRegistry::builtin(),
    };
    let primary = SourceClient::new(ingest.primary.clone()).map_err(|e| usage(e.to_string()))?;
    let supplemental = ingest
        .supplemental
        .clone()
        .map(SourceClient::new)
        .transpose()
        .map_err(|e| usage(e.to_string()))?;

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting the async runtime")?;
    let output = runtime.block_on(run_pipeline(
        &primary,
        supplemental.as_ref(),
        &entries,
        config.window(),
        Some(&registry),
    ))?;

    let out = Output::new(&config.output_dir)?;
    for format in &config.output_formats {
        let name = match format {
            OutputFormat::Csv => "corpus.csv",
            OutputFormat::Json => "corpus.jsonl",
        };
        persist_corpus(&output.corpus, &out.path(name))?;
    }
    let report = IngestReport {
        coverage: &output.coverage,
        primary_share_percent: output.coverage.primary_share(),
        supplemental_share_percent: output.coverage.supplemental_share(),
        retries: output.retries,
        unmatched: &output.unmatched,
        rejected: &output.rejected,
        duplicates: &output.duplicates,
    };
    out.json("ingest-report.json", &report)?;

    let mut warnings = Vec::new();
    for e in &output.unmatched {
        warnings.push(format!("unmatched: {} ({} {})", e.title, e.venue, e.year));
    }
    for r in &output.rejected {
        warnings.push(format!("rejected: {} ({} {}): {}", r.entry.title, r.entry.venue, r.entry.year, r.reason));
    }
    for d in &output.duplicates {
        warnings.push(format!("duplicate: kept {}, removed {}", d.survivor, d.removed.join(" ")));
    }
    out.warnings("corpus", &warnings)?;
    println!(
        "ingested {} papers: {:.1}% primary, {:.1}% supplemental, {} unmatched",
        output.corpus.len(),
        output.coverage.primary_share(),
        output.coverage.supplemental_share(),
        output.coverage.unmatched
    );
    Ok(())
}
