//! K-fold cross-validation over a penalty path.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng;

use super::cd::{CdProblem, LassoFit, SolverOptions};
use super::path::{build_path, LambdaPath, PathParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvParams {
    pub folds: usize,
    pub path: PathParams,
    pub solver: SolverOptions,
    pub seed: u64,
}

impl Default for CvParams {
    fn default() -> Self {
        Self {
            folds: 10,
            path: PathParams::default(),
            solver: SolverOptions::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub path: LambdaPath,
    /// Pooled mean out-of-fold squared error per penalty.
    pub cv_errors: Vec<f64>,
    /// Standard error of the fold-wise errors per penalty.
    pub cv_se: Vec<f64>,
    pub chosen_lambda: f64,
    pub chosen_index: usize,
    pub fold_assignment: Vec<usize>,
}

/// Random balanced fold labels: fold sizes differ by at most one.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::rng(seed));
    let mut out = vec![0; n];
    for (pos, &i) in perm.iter().enumerate() {
        out[i] = pos % folds;
    }
    out
}

/// Chooses the penalty minimising out-of-fold squared error.
///
/// The path runs from `lambda_max` of the full data. Every training fold is
/// re-standardised with its own statistics. Ties go to the smaller penalty.
pub fn cv_select(d: &Dataset, params: &CvParams) -> Result<CvResult> {
    let full = CdProblem::new(d)?;
    cv_with_problem(d, &full, params)
}

/// Cross-validates, then fits the full data along the path (warm starts)
/// down to the chosen penalty.
pub fn cv_fit(d: &Dataset, params: &CvParams) -> Result<(CvResult, LassoFit)> {
    let mut full = CdProblem::new(d)?;
    let cv = cv_with_problem(d, &full, params)?;
    let fits = full.fit_lambdas(&cv.path.lambdas[..=cv.chosen_index], &params.solver)?;
    let fit = fits.into_iter().last().expect("path prefix is nonempty");
    Ok((cv, fit))
}

fn cv_with_problem(d: &Dataset, full: &CdProblem, params: &CvParams) -> Result<CvResult> {
    let n = d.n();
    let k = params.folds;
    if k < 2 || k > n {
        return Err(Error::invalid(format!("need 2 <= folds <= n, got folds = {k}, n = {n}")));
    }
    if n / k < 2 {
        return Err(Error::invalid(format!("{k} folds over {n} rows leaves a fold with fewer than 2 rows")));
    }
    let path = build_path(full.lambda_max(), params.path.epsilon, params.path.c_count)?;
    let assignment = fold_assignment(n, k, params.seed);

    let per_fold: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|f| fold_errors(d, &assignment, f, &path, &params.solver))
        .collect::<Result<_>>()?;

    let sizes: Vec<f64> = (0..k)
        .map(|f| assignment.iter().filter(|&&a| a == f).count() as f64)
        .collect();
    let c = path.len();
    let mut cv_errors = vec![0.0; c];
    let mut cv_se = vec![0.0; c];
    for t in 0..c {
        let sse: f64 = per_fold.iter().map(|e| e[t]).sum();
        let mean = sse / n as f64;
        let spread: f64 = per_fold
            .iter()
            .zip(&sizes)
            .map(|(e, &w)| w * (e[t] / w - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        cv_errors[t] = mean;
        cv_se[t] = (spread / (k - 1) as f64).sqrt();
    }

    let mut chosen_index = 0;
    for t in 1..c {
        if cv_errors[t] <= cv_errors[chosen_index] {
            chosen_index = t;
        }
    }
    Ok(CvResult {
        chosen_lambda: path.lambdas[chosen_index],
        chosen_index,
        path,
        cv_errors,
        cv_se,
        fold_assignment: assignment,
    })
}

/// Sum of squared held-out errors for fold `f` at every penalty.
fn fold_errors(
    d: &Dataset,
    assignment: &[usize],
    f: usize,
    path: &LambdaPath,
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    let (train, test): (Vec<usize>, Vec<usize>) = (0..d.n()).partition(|&i| assignment[i] != f);
    let mut prob = CdProblem::new(&d.subset_rows(&train))?;
    let held = d.subset_rows(&test);
    let mut out = Vec::with_capacity(path.len());
    let mut warm: Option<Vec<f64>> = None;
    for &lambda in &path.lambdas {
        let fit = prob.fit(lambda, warm.as_deref(), opts)?;
        let pred = held.predict(&fit.beta());
        out.push(
            pred.iter()
                .zip(held.response())
                .map(|(p, y)| (y - p) * (y - p))
                .sum(),
        );
        warm = Some(fit.standardized);
    }
    Ok(out)
}
