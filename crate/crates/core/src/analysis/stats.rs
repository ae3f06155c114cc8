use serde::Serialize;

use crate::entropy::{mean, sample_variance};
use crate::error::{Error, Result};

/// Count, mean, sample standard deviation and five-number summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

/// Quantile by linear interpolation between the closest order statistics
/// (position `q * (n - 1)` in the sorted data).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

pub fn descriptive_stats(values: &[f64]) -> Result<Stats> {
    if values.is_empty() {
        return Err(Error::EmptyInput("descriptive statistics need at least one value"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Stats {
        count: values.len(),
        mean: mean(values),
        std: sample_variance(values).sqrt(),
        min: sorted[0],
        q25: quantile_sorted(&sorted, 0.25),
        q50: quantile_sorted(&sorted, 0.5),
        q75: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}
