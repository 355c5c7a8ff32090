use serde::Serialize;

use crate::corpus::VenueYearAggregate;
use crate::{Error, Result};

/// Mean year-over-year growth of a yearly series, in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRate {
    /// `None` when no pair of consecutive non-zero observations exists.
    pub mean_percent: Option<f64>,
    /// Number of growth ratios averaged.
    pub pairs_used: usize,
    /// Adjacent year pairs with a zero on either side (e.g. biennial gaps).
    pub skipped_pairs: Vec<(i32, i32)>,
}

/// Averages `100 * (x_t / x_prev - 1)` over consecutive non-zero observations.
///
/// Zero years are bridged: for a biennial venue the growth from one edition
/// to the next counts once, and the adjacent pairs touching the gap year are
/// reported as skipped instead of contributing -100% or infinite growth.
pub fn mean_growth_rate(series: &[(i32, u64)]) -> GrowthRate {
    let skipped_pairs = series
        .windows(2)
        .filter(|w| w[0].1 == 0 || w[1].1 == 0)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let nonzero: Vec<f64> = series
        .iter()
        .filter(|(_, v)| *v > 0)
        .map(|&(_, v)| v as f64)
        .collect();
    let rates: Vec<f64> = nonzero
        .windows(2)
        .map(|w| 100.0 * (w[1] / w[0] - 1.0))
        .collect();
    GrowthRate {
        mean_percent: (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64),
        pairs_used: rates.len(),
        skipped_pairs,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleIndicators {
    pub pc: u64,
    pub apgr: GrowthRate,
    pub acgr: GrowthRate,
}

pub fn scale_indicators(per_year: &[VenueYearAggregate]) -> Result<ScaleIndicators> {
    if per_year.len() < 2 {
        return Err(Error::InsufficientYears(per_year.len()));
    }
    let n: Vec<(i32, u64)> = per_year.iter().map(|a| (a.year, a.n_t)).collect();
    let c: Vec<(i32, u64)> = per_year.iter().map(|a| (a.year, a.c_t)).collect();
    Ok(ScaleIndicators {
        pc: n.iter().map(|(_, v)| v).sum(),
        apgr: mean_growth_rate(&n),
        acgr: mean_growth_rate(&c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn years(values: &[u64]) -> Vec<(i32, u64)> {
        values.iter().enumerate().map(|(i, &v)| (2014 + i as i32, v)).collect()
    }

    fn aggs(n: &[u64], c: &[u64]) -> Vec<VenueYearAggregate> {
        n.iter()
            .zip(c)
            .enumerate()
            .map(|(i, (&n_t, &c_t))| VenueYearAggregate {
                venue: "V".into(),
                year: 2014 + i as i32,
                n_t,
                c_t,
                citation_vector: vec![],
            })
            .collect()
    }

    #[test]
    fn acl_series() {
        let n = [147, 174, 230, 194, 256, 446, 571, 577, 603, 911, 864];
        let c = [495, 2440, 6047, 10263, 17678, 27312, 40957, 51227, 62525, 80032, 93298];
        let s = scale_indicators(&aggs(&n, &c)).unwrap();
        assert_eq!(s.pc, 4973);
        assert!((s.apgr.mean_percent.unwrap() - 22.06).abs() < 0.01);
        assert!((s.acgr.mean_percent.unwrap() - 87.89).abs() < 0.05);
        assert_eq!(s.apgr.pairs_used, 10);
        assert!(s.apgr.skipped_pairs.is_empty());
    }

    #[test]
    fn constant_series_has_zero_growth() {
        assert_eq!(mean_growth_rate(&years(&[5, 5, 5])).mean_percent, Some(0.0));
    }

    #[test]
    fn biennial_gaps_are_bridged() {
        let g = mean_growth_rate(&years(&[0, 100, 0, 150, 0, 75]));
        assert_eq!(g.pairs_used, 2);
        assert!((g.mean_percent.unwrap() - 0.0).abs() < 1e-12); // (+50%, -50%)
        assert_eq!(g.skipped_pairs.len(), 5);
    }

    #[test]
    fn too_few_years() {
        assert_eq!(scale_indicators(&aggs(&[1], &[1])).unwrap_err(), Error::InsufficientYears(1));
        assert_eq!(mean_growth_rate(&years(&[0, 0, 4])).mean_percent, None);
    }
}
