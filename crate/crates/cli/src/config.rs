//! Run configuration: JSON file, then command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use venuepulse_core::elasticity::{FieldQqeMode, DEFAULT_UNIT_BAND};
use venuepulse_core::indicators::{
    MilestoneMode, MilestoneParams, TrajectoryWindow, DEFAULT_HCR_THRESHOLD, DEFAULT_MII_QUANTILE,
    DEFAULT_MII_THRESHOLD,
};
use venuepulse_core::report::{AveragingMode, ReportParams};
use venuepulse_core::Window;
use venuepulse_ingest::IngestConfig;

use crate::exit::{usage, Exit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// The only median convention: even-length vectors average the two middles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MedianRule {
    #[default]
    MeanOfMiddles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub registry_path: Option<PathBuf>,
    /// `[start_year, end_year]`, inclusive.
    pub window: (i32, i32),
    /// Empty means every venue present in the corpus.
    pub venues: Vec<String>,
    pub hcr_threshold: u64,
    pub mii_threshold: u64,
    pub mii_quantile: f64,
    pub mii_mode: MilestoneMode,
    pub unit_band: f64,
    pub median_rule: MedianRule,
    pub averaging: AveragingMode,
    pub trajectory_window: TrajectoryWindow,
    pub field_qqe_mode: FieldQqeMode,
    pub output_dir: PathBuf,
    pub output_formats: Vec<OutputFormat>,
    pub golden_tolerance: f64,
    /// `(venue, year)` golden rows excluded from diffs.
    pub flagged_rows: Vec<(String, i32)>,
    pub significance_level: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let w = Window::default();
        Self {
            corpus_path: None,
            registry_path: None,
            window: (w.start, w.end),
            venues: Vec::new(),
            hcr_threshold: DEFAULT_HCR_THRESHOLD,
            mii_threshold: DEFAULT_MII_THRESHOLD,
            mii_quantile: DEFAULT_MII_QUANTILE,
            mii_mode: MilestoneMode::AbsoluteOnly,
            unit_band: DEFAULT_UNIT_BAND,
            median_rule: MedianRule::MeanOfMiddles,
            averaging: AveragingMode::Pooled,
            trajectory_window: TrajectoryWindow::SingleYear,
            field_qqe_mode: FieldQqeMode::VenueAveraged,
            output_dir: PathBuf::from("out"),
            output_formats: vec![OutputFormat::Csv],
            golden_tolerance: 0.005,
            flagged_rows: vec![("ACL".to_string(), 2021)],
            significance_level: 0.05,
            ingest: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Exit> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), Exit> {
        let (start, end) = self.window;
        if start >= end {
            return Err(usage(format!("window {start}:{end} must have start < end")));
        }
        if self.hcr_threshold == 0 || self.mii_threshold == 0 {
            return Err(usage("thresholds must be > 0"));
        }
        if self.unit_band.is_nan() || self.unit_band <= 0.0 {
            return Err(usage("unit_band must be > 0"));
        }
        if !(0.0..1.0).contains(&self.mii_quantile) {
            return Err(usage("mii_quantile must lie in [0, 1)"));
        }
        if self.golden_tolerance.is_nan() || self.golden_tolerance < 0.0 {
            return Err(usage("golden_tolerance must be >= 0"));
        }
        if self.output_formats.is_empty() {
            return Err(usage("at least one output format is required"));
        }
        Ok(())
    }

    pub fn window(&self) -> Window {
        Window::new(self.window.0, self.window.1).expect("validated")
    }

    pub fn milestone(&self) -> MilestoneParams {
        MilestoneParams {
            abs_threshold: self.mii_threshold,
            rel_quantile: self.mii_quantile,
            mode: self.mii_mode,
        }
    }

    pub fn report_params(&self) -> ReportParams {
        ReportParams {
            hcr_threshold: self.hcr_threshold,
            milestone: self.milestone(),
            unit_band: self.unit_band,
            averaging: self.averaging,
        }
    }
}

/// Parses `A:B` into a year pair.
pub fn parse_window(text: &str) -> Result<(i32, i32), String> {
    let (a, b) = text.split_once(':').ok_or("expected START:END")?;
    let year = |s: &str| s.trim().parse::<i32>().map_err(|e| format!("{s:?}: {e}"));
    Ok((year(a)?, year(b)?))
}

/// Parses `LABEL:YEAR`.
pub fn parse_flag(text: &str) -> Result<(String, i32), String> {
    let (label, year) = text.rsplit_once(':').ok_or("expected LABEL:YEAR")?;
    Ok((label.to_string(), year.trim().parse().map_err(|e| format!("{year:?}: {e}"))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        c.validate().unwrap();
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"window":[2016,2020],"mii_mode":"dual"}"#).unwrap();
        assert_eq!(c.window(), Window::new(2016, 2020).unwrap());
        assert_eq!(c.hcr_threshold, 100);
        assert_eq!(c.milestone().mode, MilestoneMode::Dual);
    }

    #[test]
    fn invariants() {
        let bad = [
            RunConfig { window: (2020, 2020), ..Default::default() },
            RunConfig { hcr_threshold: 0, ..Default::default() },
            RunConfig { unit_band: 0.0, ..Default::default() },
        ];
        for c in bad {
            assert_eq!(c.validate().unwrap_err().code, 3);
        }
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn flag_parsers() {
        assert_eq!(parse_window("2014:2024"), Ok((2014, 2024)));
        assert!(parse_window("2014").is_err());
        assert_eq!(parse_flag("ACL:2021"), Ok(("ACL".into(), 2021)));
    }
}
