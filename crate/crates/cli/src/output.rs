//! Writing result files under the output directory.
//!
//! Every file is rendered in memory and written in one call, so a failed
//! run never leaves a half-written table behind. Warnings go to a
//! `<file>.warnings` sidecar next to the data file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.join(rel)
    }

    fn write(&self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn csv<I, R, S>(&self, rel: &str, header: &[&str], rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{}", e.error()))?;
        self.write(rel, &bytes)
    }

    pub fn raw(&self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        self.write(rel, bytes)
    }

    pub fn json<T: Serialize>(&self, rel: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    /// Writes `<rel>.warnings`, or removes a stale one when there is nothing
    /// to report.
    pub fn warnings(&self, rel: &str, warnings: &[String]) -> Result<()> {
        let name = format!("{rel}.warnings");
        if warnings.is_empty() {
            let path = self.path(&name);
            if path.exists() {
                fs::remove_file(&path).with_context(|| format!("removing {}", path.display()))?;
            }
            return Ok(());
        }
        for w in warnings {
            log::warn!("{w}");
        }
        let mut text = warnings.join("\n");
        text.push('\n');
        self.write(&name, text.as_bytes())?;
        Ok(())
    }
}

/// File-name-safe form of a venue or category label.
pub fn file_stem(label: &str) -> String {
    let stem: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if stem.is_empty() {
        "_".into()
    } else {
        stem
    }
}
