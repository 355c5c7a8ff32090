//! Corpus files: comma-separated with a header row, or one JSON object per line.
//!
//! The format is picked from the extension (`.jsonl`, `.ndjson` and `.json`
//! are JSON lines, everything else is CSV).

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::validate::{self, annual_field, annual_field_year, to_raw};
use super::{validate_record, Corpus, CorpusError, RawRecord, ValidationError, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    JsonLines,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "jsonl" || ext == "ndjson" || ext == "json" => Self::JsonLines,
            _ => Self::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: row {row}: malformed input: {message}")]
    Malformed {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("{path}: row {row}: schema violation in `{field}`: {error}", field = .error.field())]
    SchemaViolation {
        path: PathBuf,
        row: usize,
        error: ValidationError,
        /// Every violation of the row, the first one is shown in the message.
        all: Vec<ValidationError>,
    },
    #[error("{path}: {source}")]
    Corpus {
        path: PathBuf,
        source: CorpusError,
    },
}

impl CorpusFileError {
    pub fn is_schema_error(&self) -> bool {
        !matches!(self, Self::Io { .. })
    }
}

/// Reads raw rows without validating them. Rows are numbered from 1.
pub fn read_raw(path: &Path) -> Result<Vec<RawRecord>, CorpusFileError> {
    let io_err = |source| CorpusFileError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::open(path).map_err(io_err)?;
    match FileFormat::from_path(path) {
        FileFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().from_reader(file);
            let headers = reader
                .headers()
                .map_err(|e| CorpusFileError::Malformed {
                    path: path.to_path_buf(),
                    row: 0,
                    message: e.to_string(),
                })?
                .clone();
            let mut rows = Vec::new();
            for (i, rec) in reader.records().enumerate() {
                let rec = rec.map_err(|e| CorpusFileError::Malformed {
                    path: path.to_path_buf(),
                    row: i + 1,
                    message: e.to_string(),
                })?;
                let mut raw = RawRecord::new();
                for (h, v) in headers.iter().zip(rec.iter()) {
                    raw.set(h, v);
                }
                rows.push(raw);
            }
            Ok(rows)
        }
        FileFormat::JsonLines => {
            let mut rows = Vec::new();
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                let malformed = |message: String| CorpusFileError::Malformed {
                    path: path.to_path_buf(),
                    row: i + 1,
                    message,
                };
                let value: serde_json::Value =
                    serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
                let raw = RawRecord::from_json(&value)
                    .ok_or_else(|| malformed("expected a JSON object".into()))?;
                rows.push(raw);
            }
            Ok(rows)
        }
    }
}

/// Loads and validates a corpus file. The first invalid row aborts the load.
pub fn load_corpus(path: &Path, window: Window) -> Result<Corpus, CorpusFileError> {
    let rows = read_raw(path)?;
    let mut records = Vec::with_capacity(rows.len());
    for (i, raw) in rows.iter().enumerate() {
        match validate_record(raw, window) {
            Ok(r) => records.push(r),
            Err(all) => {
                return Err(CorpusFileError::SchemaViolation {
                    path: path.to_path_buf(),
                    row: i + 1,
                    error: all[0].clone(),
                    all,
                })
            }
        }
    }
    Corpus::from_records(records, window).map_err(|source| CorpusFileError::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

/// Column order of a persisted CSV: schema fields, annual fields of the
/// window, then any extra columns in sorted order.
pub fn csv_header(corpus: &Corpus) -> Vec<String> {
    let mut cols: Vec<String> = [
        validate::PAPER_ID,
        validate::TITLE,
        validate::VENUE,
        validate::YEAR,
        validate::AI_CATEGORY,
        validate::NOTES,
        validate::CITATION_COUNT,
        validate::TOP_CONF,
        validate::TOP_JOURNAL,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend(corpus.window().years().map(annual_field));
    let extras: BTreeSet<&String> = corpus.records().iter().flat_map(|r| r.extra.keys()).collect();
    cols.extend(extras.into_iter().cloned());
    cols
}

/// Writes the corpus and returns the number of bytes written.
pub fn persist_corpus(corpus: &Corpus, path: &Path) -> Result<u64, CorpusFileError> {
    let io_err = |source| CorpusFileError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut buf: Vec<u8> = Vec::new();
    match FileFormat::from_path(path) {
        FileFormat::Csv => {
            let header = csv_header(corpus);
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&header)
                .map_err(|e| io_err(std::io::Error::other(e)))?;
            for r in corpus.records() {
                let raw = to_raw(r);
                w.write_record(header.iter().map(|h| match raw.0.get(h) {
                    Some(v) => v.as_str(),
                    None if annual_field_year(h).is_some() => "0",
                    None => "",
                }))
                    .map_err(|e| io_err(std::io::Error::other(e)))?;
            }
            w.flush().map_err(io_err)?;
        }
        FileFormat::JsonLines => {
            for r in corpus.records() {
                let raw = to_raw(r);
                serde_json::to_writer(&mut buf, &raw.to_json())
                    .map_err(|e| io_err(std::io::Error::other(e)))?;
                buf.push(b'\n');
            }
        }
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(&buf).map_err(io_err)?;
    Ok(buf.len() as u64)
}
