//! Split-and-conquer LASSO: fit random row chunks independently, keep the
//! slopes that enough chunks select, and combine the chunk estimates with
//! Gram-matrix weights.

use std::time::Instant;

use log::warn;
use nalgebra::DVector;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lasso::{cv_fit, CvParams};
use crate::linalg::{gram_with_intercept, solve_spd};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpcConfig {
    pub k_chunks: usize,
    /// Minimum number of chunks that must select a slope.
    pub vote_threshold: usize,
    /// Seed of the row split.
    pub seed: u64,
    /// Cross-validation and solver settings used inside every chunk.
    pub cv: CvParams,
}

impl SpcConfig {
    pub fn new(vote_threshold: usize, k_chunks: usize, seed: u64) -> Self {
        Self {
            k_chunks,
            vote_threshold,
            seed,
            cv: CvParams { seed, ..CvParams::default() },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k_chunks == 0 || self.vote_threshold == 0 || self.vote_threshold > self.k_chunks {
            return Err(Error::invalid(format!(
                "need 1 <= w <= K, got w = {}, K = {}",
                self.vote_threshold, self.k_chunks
            )));
        }
        Ok(())
    }
}

/// Sorted predictor indices kept by the vote.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportSet {
    pub indices: Vec<usize>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }
}

/// Random partition of `0..n` into `k` chunks whose sizes differ by at most
/// one. Each chunk is sorted.
pub fn split_data(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot split {n} rows into {k} chunks")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::rng(seed));
    let (base, extra) = (n / k, n % k);
    let mut chunks = Vec::with_capacity(k);
    let mut start = 0;
    for c in 0..k {
        let len = base + usize::from(c < extra);
        let mut chunk = perm[start..start + len].to_vec();
        chunk.sort_unstable();
        chunks.push(chunk);
        start += len;
    }
    Ok(chunks)
}

/// Slopes that are nonzero in at least `w` of the chunk fits.
///
/// `chunk_slopes` holds one slope vector (no intercept) per chunk.
pub fn majority_vote(chunk_slopes: &[Vec<f64>], w: usize) -> SupportSet {
    let p = chunk_slopes.first().map_or(0, Vec::len);
    debug_assert!(chunk_slopes.iter().all(|b| b.len() == p));
    let indices = (0..p)
        .filter(|&j| chunk_slopes.iter().filter(|b| b[j] != 0.0).count() >= w)
        .collect();
    SupportSet { indices }
}

/// Gram-weighted combination of the chunk estimates on `support`.
///
/// `chunk_fits` are intercept-first vectors of length `p + 1`. The intercept
/// is always part of the combination. Returns an intercept-first vector that
/// is zero off the support.
pub fn combine_estimates(
    d: &Dataset,
    chunks: &[Vec<usize>],
    chunk_fits: &[Vec<f64>],
    support: &SupportSet,
) -> Result<Vec<f64>> {
    if chunks.len() != chunk_fits.len() || chunks.is_empty() {
        return Err(Error::Dimension(format!(
            "{} chunks but {} chunk fits",
            chunks.len(),
            chunk_fits.len()
        )));
    }
    if let Some(bad) = chunk_fits.iter().find(|b| b.len() != d.p() + 1) {
        return Err(Error::Dimension(format!(
            "chunk fit has length {}, expected {}",
            bad.len(),
            d.p() + 1
        )));
    }
    if let Some(&j) = support.indices.iter().find(|&&j| j >= d.p()) {
        return Err(Error::invalid(format!("support index {j} out of range")));
    }
    if support.is_empty() {
        warn!("empty combined support, combining intercepts only");
    }
    let q = support.len() + 1;
    let mut lhs = nalgebra::DMatrix::<f64>::zeros(q, q);
    let mut rhs = DVector::<f64>::zeros(q);
    for (rows, fit) in chunks.iter().zip(chunk_fits) {
        let g = gram_with_intercept(d, Some(rows), &support.indices);
        let b = DVector::from_iterator(
            q,
            std::iter::once(fit[0]).chain(support.indices.iter().map(|&j| fit[j + 1])),
        );
        rhs += &g * b;
        lhs += g;
    }
    let (sol, _) = solve_spd(&lhs, &rhs, "split-and-conquer combination");
    let mut out = vec![0.0; d.p() + 1];
    out[0] = sol[0];
    for (t, &j) in support.indices.iter().enumerate() {
        out[j + 1] = sol[t + 1];
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChunkDiagnostics {
    pub rows: usize,
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub nonzero: usize,
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpcFit {
    /// Intercept followed by slopes.
    pub beta: Vec<f64>,
    pub support: SupportSet,
    pub chunks: Vec<ChunkDiagnostics>,
    pub combine_time_s: f64,
    /// Slowest chunk plus the combination step, as if every chunk had its
    /// own core.
    pub parallel_time_s: f64,
}

/// Splits `d`, fits every chunk with cross-validated LASSO, votes and
/// combines.
pub fn spc_fit(d: &Dataset, cfg: &SpcConfig) -> Result<SpcFit> {
    cfg.validate()?;
    let chunks = split_data(d.n(), cfg.k_chunks, cfg.seed)?;
    let fitted: Vec<(Vec<f64>, ChunkDiagnostics)> = chunks
        .par_iter()
        .map(|rows| {
            let start = Instant::now();
            let sub = d.subset_rows(rows);
            let (_, fit) = cv_fit(&sub, &cfg.cv)?;
            let diag = ChunkDiagnostics {
                rows: rows.len(),
                lambda: fit.lambda,
                iterations: fit.iterations,
                converged: fit.converged,
                nonzero: fit.nonzero_count(),
                time_s: start.elapsed().as_secs_f64(),
            };
            Ok((fit.beta(), diag))
        })
        .collect::<Result<_>>()?;
    let (fits, diags): (Vec<Vec<f64>>, Vec<ChunkDiagnostics>) = fitted.into_iter().unzip();

    let start = Instant::now();
    let slopes: Vec<Vec<f64>> = fits.iter().map(|b| b[1..].to_vec()).collect();
    let support = majority_vote(&slopes, cfg.vote_threshold);
    let beta = combine_estimates(d, &chunks, &fits, &support)?;
    let combine_time_s = start.elapsed().as_secs_f64();
    let slowest = diags.iter().map(|c| c.time_s).fold(0.0, f64::max);
    Ok(SpcFit {
        beta,
        support,
        chunks: diags,
        combine_time_s,
        parallel_time_s: slowest + combine_time_s,
    })
}
