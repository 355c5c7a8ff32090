use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::influence::{central_and_tail_with, gini, milestone_index, MilestoneParams, DEFAULT_HCR_THRESHOLD};
use crate::corpus::{citation_vector, cohort_vector, Corpus, WindowMode};
use crate::{Error, Result};

/// Per-year indicators that can be tracked over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Ac,
    Mc,
    Hcr,
    Zcr,
    Gini,
    Mii,
}

impl Indicator {
    pub const ALL: [Indicator; 6] = [Self::Ac, Self::Mc, Self::Hcr, Self::Zcr, Self::Gini, Self::Mii];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ac => "ac",
            Self::Mc => "mc",
            Self::Hcr => "hcr",
            Self::Zcr => "zcr",
            Self::Gini => "gini",
            Self::Mii => "mii",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownIndicator(s.to_string()))
    }
}

/// Which citation vector a trajectory reads for year `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryWindow {
    /// Citations received during `t` by papers published in `t`.
    #[default]
    SingleYear,
    /// Cumulative counts of the papers published in `t`.
    Cumulative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryParams {
    pub window: TrajectoryWindow,
    pub hcr_threshold: u64,
    pub milestone: MilestoneParams,
}

impl Default for TrajectoryParams {
    fn default() -> Self {
        Self {
            window: TrajectoryWindow::SingleYear,
            hcr_threshold: DEFAULT_HCR_THRESHOLD,
            milestone: MilestoneParams::default(),
        }
    }
}

/// Value of `indicator` over one citation vector; `None` when the vector is empty.
pub fn indicator_value(
    indicator: Indicator,
    vector: &[u64],
    params: &TrajectoryParams,
    reference: Option<&[u64]>,
) -> Result<Option<f64>> {
    if vector.is_empty() {
        return Ok(None);
    }
    let v = match indicator {
        Indicator::Ac | Indicator::Mc | Indicator::Hcr | Indicator::Zcr => {
            let ct = central_and_tail_with(vector, params.hcr_threshold)?;
            match indicator {
                Indicator::Ac => ct.ac,
                Indicator::Mc => ct.mc,
                Indicator::Hcr => ct.hcr,
                _ => ct.zcr,
            }
        }
        Indicator::Gini => gini(vector)?,
        Indicator::Mii => milestone_index(vector, &params.milestone, reference)?.mii_percent,
    };
    Ok(Some(v))
}

pub fn year_vector(corpus: &Corpus, venue: &str, year: i32, window: TrajectoryWindow) -> Result<Vec<u64>> {
    match window {
        TrajectoryWindow::SingleYear => citation_vector(corpus, venue, WindowMode::SingleYear(year)),
        TrajectoryWindow::Cumulative => cohort_vector(corpus, venue, year),
    }
}

/// Same-year vector pooled over every venue, the reference for dual-mode MII.
pub fn pooled_year_vector(corpus: &Corpus, year: i32, window: TrajectoryWindow) -> Vec<u64> {
    let mut v: Vec<u64> = corpus
        .records()
        .iter()
        .filter(|r| r.year == year)
        .map(|r| match window {
            TrajectoryWindow::SingleYear => r.citations_in(year),
            TrajectoryWindow::Cumulative => r.citation_count,
        })
        .collect();
    v.sort_unstable();
    v
}

/// One value per window year; years with an empty vector are omitted.
pub fn trajectory(
    corpus: &Corpus,
    venue: &str,
    indicator: Indicator,
    params: &TrajectoryParams,
) -> Result<Vec<(i32, f64)>> {
    let mut out = Vec::new();
    for year in corpus.window().years() {
        let v = year_vector(corpus, venue, year, params.window)?;
        let reference = (indicator == Indicator::Mii && params.milestone.mode == super::MilestoneMode::Dual)
            .then(|| pooled_year_vector(corpus, year, params.window));
        if let Some(value) = indicator_value(indicator, &v, params, reference.as_deref())? {
            out.push((year, value));
        }
    }
    Ok(out)
}
