//! Sample quantiles by linear interpolation between order statistics
//! (Hyndman & Fan type 7, the default of R and NumPy).

/// Quantile `q` in [0, 1] of an ascending-sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

pub fn quantile_u64(sorted: &[u64], q: f64) -> Option<f64> {
    let v: Vec<f64> = sorted.iter().map(|&c| c as f64).collect();
    quantile_sorted(&v, q)
}

/// Percentiles exported for distribution plots.
pub const PLOT_PERCENTILES: [f64; 5] = [0.05, 0.25, 0.50, 0.75, 0.95];

/// `log10(1 + c)` percentiles of a citation vector (sorted or not).
pub fn log_percentiles(citations: &[u64]) -> Option<[f64; 5]> {
    let mut logs: Vec<f64> = citations.iter().map(|&c| (1.0 + c as f64).log10()).collect();
    logs.sort_by(f64::total_cmp);
    let mut out = [0.0; 5];
    for (slot, q) in out.iter_mut().zip(PLOT_PERCENTILES) {
        *slot = quantile_sorted(&logs, q)?;
    }
    Some(out)
}
