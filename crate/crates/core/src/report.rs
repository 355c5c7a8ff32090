//! Per-venue summary row covering all four dimensions.

use serde::{Deserialize, Serialize};

use crate::corpus::{citation_vector, venue_aggregates, Corpus, WindowMode};
use crate::elasticity::{mean_magnitude, qqe_table_from_series, DEFAULT_UNIT_BAND};
use crate::format::{fixed_or, INDICATOR_DECIMALS};
use crate::indicators::{
    central_and_tail_with, h_index, indicator_value, milestone_index, norm_h, pooled_year_vector,
    prestige, scale_indicators, top_conf_coverage, year_vector, Indicator, MilestoneMode,
    MilestoneParams, TrajectoryParams, TrajectoryWindow, DEFAULT_HCR_THRESHOLD,
};
use crate::{Error, Result};

/// How the cross-sectional influence indicators (AC, MC, HCR, ZCR) are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingMode {
    /// Over the venue's pooled cumulative citation vector.
    #[default]
    Pooled,
    /// Mean of the per-cohort values (cumulative counts of each year's papers).
    AnnualMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub hcr_threshold: u64,
    pub milestone: MilestoneParams,
    pub unit_band: f64,
    pub averaging: AveragingMode,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self {
            hcr_threshold: DEFAULT_HCR_THRESHOLD,
            milestone: MilestoneParams::default(),
            unit_band: DEFAULT_UNIT_BAND,
            averaging: AveragingMode::Pooled,
        }
    }
}

/// One venue's summary row; `None` marks an indicator undefined for the data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorReport {
    pub venue: String,
    pub pc: u64,
    pub apgr: Option<f64>,
    pub acgr: Option<f64>,
    pub ac: f64,
    pub mc: f64,
    pub hcr: f64,
    pub zcr: f64,
    pub h_index: u64,
    pub norm_h: f64,
    pub mii: f64,
    pub milestone_count: usize,
    pub gini: f64,
    pub tcs: Option<f64>,
    pub tjs: Option<f64>,
    pub tcc: f64,
    /// Mean of the defined annual QQE magnitudes.
    pub qqe: Option<f64>,
    /// Adjacent year pairs left out of APGR because of a zero count.
    pub skipped_growth_pairs: Vec<(i32, i32)>,
}

/// Summary columns in report order.
pub const SUMMARY_HEADER: [&str; 15] = [
    "Conference", "PC", "APGR", "ACGR", "AC", "MC", "HCR", "ZCR", "H", "Norm-H", "MII", "TCS", "TJS",
    "TCC", "QQE",
];

impl IndicatorReport {
    pub fn csv_row(&self) -> Vec<String> {
        let f = |v: Option<f64>| fixed_or(v, INDICATOR_DECIMALS, "");
        vec![
            self.venue.clone(),
            self.pc.to_string(),
            f(self.apgr),
            f(self.acgr),
            f(Some(self.ac)),
            f(Some(self.mc)),
            f(Some(self.hcr)),
            f(Some(self.zcr)),
            self.h_index.to_string(),
            f(Some(self.norm_h)),
            f(Some(self.mii)),
            f(self.tcs),
            f(self.tjs),
            f(Some(self.tcc)),
            f(self.qqe),
        ]
    }
}

fn milestones(corpus: &Corpus, venue: &str, params: &MilestoneParams) -> Result<(usize, usize)> {
    match params.mode {
        MilestoneMode::AbsoluteOnly => {
            let v = citation_vector(corpus, venue, WindowMode::Cumulative)?;
            Ok((milestone_index(&v, params, None)?.count, v.len()))
        }
        MilestoneMode::Dual => {
            // The relative threshold is drawn from each publication year's
            // pooled all-venue distribution.
            let (mut count, mut n) = (0, 0);
            for year in corpus.window().years() {
                let v = year_vector(corpus, venue, year, TrajectoryWindow::Cumulative)?;
                if v.is_empty() {
                    continue;
                }
                let reference = pooled_year_vector(corpus, year, TrajectoryWindow::Cumulative);
                count += milestone_index(&v, params, Some(&reference))?.count;
                n += v.len();
            }
            Ok((count, n))
        }
    }
}

pub fn venue_report(corpus: &Corpus, venue: &str, params: &ReportParams) -> Result<IndicatorReport> {
    let aggs = venue_aggregates(corpus, venue)?;
    let scale = scale_indicators(&aggs)?;
    let cumulative = citation_vector(corpus, venue, WindowMode::Cumulative)?;
    if cumulative.is_empty() {
        return Err(Error::EmptyVenue);
    }

    let (ac, mc, hcr, zcr) = match params.averaging {
        AveragingMode::Pooled => {
            let ct = central_and_tail_with(&cumulative, params.hcr_threshold)?;
            (ct.ac, ct.mc, ct.hcr, ct.zcr)
        }
        AveragingMode::AnnualMean => {
            let tp = TrajectoryParams {
                window: TrajectoryWindow::Cumulative,
                hcr_threshold: params.hcr_threshold,
                milestone: params.milestone,
            };
            let mut sums = [0.0; 4];
            let mut years = 0usize;
            for year in corpus.window().years() {
                let v = year_vector(corpus, venue, year, TrajectoryWindow::Cumulative)?;
                if v.is_empty() {
                    continue;
                }
                years += 1;
                for (slot, ind) in sums.iter_mut().zip([Indicator::Ac, Indicator::Mc, Indicator::Hcr, Indicator::Zcr]) {
                    *slot += indicator_value(ind, &v, &tp, None)?.unwrap_or_default();
                }
            }
            let y = years as f64;
            (sums[0] / y, sums[1] / y, sums[2] / y, sums[3] / y)
        }
    };

    let h = h_index(&cumulative);
    let (milestone_count, n) = milestones(corpus, venue, &params.milestone)?;
    let records: Vec<_> = corpus.venue_records(venue)?.collect();
    let (tcs, tjs, tcc) = match prestige(records.iter().copied()) {
        Ok(p) => (Some(p.tcs), Some(p.tjs), p.tcc),
        Err(Error::ZeroCitationMass) => (None, None, top_conf_coverage(records.iter().copied())?),
        Err(e) => return Err(e),
    };
    let series: Vec<_> = aggs.iter().map(|a| (a.year, a.n_t, a.c_t)).collect();
    let qqe_rows = qqe_table_from_series(venue, &series, params.unit_band);

    Ok(IndicatorReport {
        venue: venue.to_string(),
        pc: scale.pc,
        apgr: scale.apgr.mean_percent,
        acgr: scale.acgr.mean_percent,
        ac,
        mc,
        hcr,
        zcr,
        h_index: h,
        norm_h: norm_h(h, scale.pc)?,
        mii: 100.0 * milestone_count as f64 / n as f64,
        milestone_count,
        gini: crate::indicators::gini(&cumulative)?,
        tcs,
        tjs,
        tcc,
        qqe: mean_magnitude(&qqe_rows),
        skipped_growth_pairs: scale.apgr.skipped_pairs,
    })
}
