//! Random row samplers: simple random sampling and leverage-weighted sampling.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::rng;

use super::index::SubdataIndex;

/// Simple random sample of `k` of `n` rows without replacement. Rows come back sorted.
pub fn uniform_select(n: usize, k: usize, seed: u64) -> Result<SubdataIndex> {
    if k > n {
        return Err(Error::InsufficientRows {
            available: n,
            needed: k,
        });
    }
    let mut rows = index::sample(&mut rng::rng(seed), n, k).into_vec();
    rows.sort_unstable();
    Ok(SubdataIndex::sampled(rows, "UNIF"))
}

/// Draws `k` distinct rows with probability proportional to `scores`, without
/// replacement. Rows come back sorted.
///
/// Uses Efraimidis-Spirakis exponential keys, which has the same distribution
/// as `k` sequential weighted draws that remove each drawn row.
pub fn leverage_select(scores: &[f64], k: usize, seed: u64) -> Result<SubdataIndex> {
    if scores.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
        return Err(Error::invalid("scores must be finite and nonnegative"));
    }
    let positive = scores.iter().filter(|&&s| s > 0.0).count();
    if positive < k {
        return Err(Error::InsufficientRows {
            available: positive,
            needed: k,
        });
    }
    let mut rows = index::sample_weighted(&mut rng::rng(seed), scores.len(), |i| scores[i], k)
        .map_err(|e| Error::invalid(format!("weighted sampling failed: {e}")))?
        .into_vec();
    rows.sort_unstable();
    Ok(SubdataIndex::sampled(rows, "LEV"))
}
