//! Token distribution statistics (nearest-rank percentiles).

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("token statistics need at least one sample")]
pub struct EmptySample;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenStats {
    pub min: usize,
    pub max: usize,
    pub median: f64,
    pub p95: f64,
    pub n: usize,
}

/// Value at 1-based nearest rank `ceil(pct/100 * n)` of a sorted sample,
/// computed in integers.
fn nearest_rank(sorted: &[usize], pct: usize) -> usize {
    let n = sorted.len();
    let rank = (pct * n).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// min/max exact; median is the middle element (lower middle for even n);
/// p95 by nearest rank.
pub fn token_stats(counts: &[usize]) -> Result<TokenStats, EmptySample> {
    if counts.is_empty() {
        return Err(EmptySample);
    }
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    Ok(TokenStats {
        min: sorted[0],
        max: sorted[n - 1],
        median: sorted[(n - 1) / 2] as f64,
        p95: nearest_rank(&sorted, 95) as f64,
        n,
    })
}
