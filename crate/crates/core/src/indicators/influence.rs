//! Central tendency, tail shares, H-index, milestone share and Gini of a
//! citation vector.

use serde::{Deserialize, Serialize};

use crate::quantile::quantile_u64;
use crate::{Error, Result};

pub const DEFAULT_HCR_THRESHOLD: u64 = 100;
pub const DEFAULT_MII_THRESHOLD: u64 = 1000;
pub const DEFAULT_MII_QUANTILE: f64 = 0.001;

fn sorted_copy(v: &[u64]) -> std::borrow::Cow<'_, [u64]> {
    if v.is_sorted() {
        v.into()
    } else {
        let mut owned = v.to_vec();
        owned.sort_unstable();
        owned.into()
    }
}

/// Largest `h` such that at least `h` papers have `h` or more citations.
pub fn h_index(citations: &[u64]) -> u64 {
    let sorted = sorted_copy(citations);
    sorted
        .iter()
        .rev()
        .enumerate()
        .take_while(|&(rank, &c)| c > rank as u64)
        .count() as u64
}

/// H-index per 100 accepted papers.
pub fn norm_h(h: u64, pc: u64) -> Result<f64> {
    if pc == 0 {
        return Err(Error::EmptyVenue);
    }
    Ok(100.0 * h as f64 / pc as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralTail {
    pub ac: f64,
    pub mc: f64,
    pub hcr: f64,
    pub zcr: f64,
}

pub fn median(citations: &[u64]) -> Option<f64> {
    let sorted = sorted_copy(citations);
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2] as f64),
        _ => Some((sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0),
    }
}

/// Mean, median, share above `hcr_threshold` (strict) and share of zeros.
pub fn central_and_tail_with(citations: &[u64], hcr_threshold: u64) -> Result<CentralTail> {
    if citations.is_empty() {
        return Err(Error::EmptyVenue);
    }
    let n = citations.len() as f64;
    let total: u64 = citations.iter().sum();
    let high = citations.iter().filter(|&&c| c > hcr_threshold).count();
    let zero = citations.iter().filter(|&&c| c == 0).count();
    Ok(CentralTail {
        ac: total as f64 / n,
        mc: median(citations).unwrap_or_default(),
        hcr: 100.0 * high as f64 / n,
        zcr: 100.0 * zero as f64 / n,
    })
}

pub fn central_and_tail(citations: &[u64]) -> Result<CentralTail> {
    central_and_tail_with(citations, DEFAULT_HCR_THRESHOLD)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MilestoneMode {
    /// Only the absolute threshold applies.
    #[default]
    AbsoluteOnly,
    /// The paper must also reach the `(1 - rel_quantile)` quantile of a
    /// reference annual distribution.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MilestoneParams {
    pub abs_threshold: u64,
    pub rel_quantile: f64,
    pub mode: MilestoneMode,
}

impl Default for MilestoneParams {
    fn default() -> Self {
        Self {
            abs_threshold: DEFAULT_MII_THRESHOLD,
            rel_quantile: DEFAULT_MII_QUANTILE,
            mode: MilestoneMode::AbsoluteOnly,
        }
    }
}

impl MilestoneParams {
    /// Minimum citation count a paper needs given its reference distribution.
    pub fn threshold(&self, reference: &[u64]) -> Result<f64> {
        match self.mode {
            MilestoneMode::AbsoluteOnly => Ok(self.abs_threshold as f64),
            MilestoneMode::Dual => {
                if !(0.0..1.0).contains(&self.rel_quantile) {
                    return Err(Error::InvalidParameter(format!(
                        "rel_quantile {} outside [0, 1)",
                        self.rel_quantile
                    )));
                }
                let reference = sorted_copy(reference);
                let rel = quantile_u64(&reference, 1.0 - self.rel_quantile).ok_or(Error::EmptyVenue)?;
                Ok(rel.max(self.abs_threshold as f64))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Milestones {
    pub count: usize,
    pub mii_percent: f64,
}

/// Milestone share of a vector. In dual mode `reference` is the annual
/// distribution the relative quantile is taken over; `None` uses the vector
/// itself.
pub fn milestone_index(
    citations: &[u64],
    params: &MilestoneParams,
    reference: Option<&[u64]>,
) -> Result<Milestones> {
    if citations.is_empty() {
        return Err(Error::EmptyVenue);
    }
    let threshold = params.threshold(reference.unwrap_or(citations))?;
    let count = citations.iter().filter(|&&c| c as f64 >= threshold).count();
    Ok(Milestones {
        count,
        mii_percent: 100.0 * count as f64 / citations.len() as f64,
    })
}

/// Gini coefficient `sum((2i - n - 1) c_i) / (n * sum(c))` over the sorted
/// vector (1-based `i`). An all-zero vector has Gini 0.
pub fn gini(citations: &[u64]) -> Result<f64> {
    if citations.is_empty() {
        return Err(Error::EmptyVenue);
    }
    let sorted = sorted_copy(citations);
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().map(|&c| c as f64).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &c)| (2.0 * (i as f64 + 1.0) - n - 1.0) * c as f64)
        .sum();
    Ok(weighted / (n * total))
}
