//! Ingest configuration with environment overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::client::{Priority, SourceConfig};

pub const ENV_API_KEY: &str = "VENUEPULSE_API_KEY";
pub const ENV_ENDPOINT: &str = "VENUEPULSE_ENDPOINT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// `title,venue,year[,ai_category]` listing of official proceedings.
    pub proceedings_path: PathBuf,
    pub primary: SourceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supplemental: Option<SourceConfig>,
}

impl IngestConfig {
    /// Only the primary endpoint and API key can be overridden.
    pub fn apply_env_with(&mut self, lookup: impl Fn(&str) -> Option<String>) {
        if let Some(key) = lookup(ENV_API_KEY).filter(|v| !v.is_empty()) {
            self.primary.api_key = Some(key);
        }
        if let Some(endpoint) = lookup(ENV_ENDPOINT).filter(|v| !v.is_empty()) {
            self.primary.base_endpoint = endpoint;
        }
        self.primary.priority = Priority::Primary;
        if let Some(s) = &mut self.supplemental {
            s.priority = Priority::Supplemental;
        }
    }

    pub fn apply_env(&mut self) {
        self.apply_env_with(|k| std::env::var(k).ok());
    }
}
