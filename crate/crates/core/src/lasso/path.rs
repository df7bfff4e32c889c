use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::dot;

use super::cd::{CdProblem, LassoFit, SolverOptions};

/// Log-equispaced, strictly decreasing penalty grid from `lambda_max` down to
/// `epsilon * lambda_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPath {
    pub lambdas: Vec<f64>,
    pub epsilon: f64,
    pub c_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub epsilon: f64,
    pub c_count: usize,
}

impl Default for PathParams {
    fn default() -> Self {
        Self {
            epsilon: 0.001,
            c_count: 100,
        }
    }
}

/// `max_j |x_j^T y| / n` for standardised columns and the (centred) response
/// stored in `x`.
pub fn lambda_max(x: &Dataset) -> f64 {
    let n = x.n() as f64;
    x.columns()
        .iter()
        .map(|c| (dot(c, x.response()) / n).abs())
        .fold(0.0, f64::max)
}

pub fn build_path(lmax: f64, epsilon: f64, c_count: usize) -> Result<LambdaPath> {
    if !(lmax > 0.0) || !lmax.is_finite() {
        return Err(Error::invalid(format!("lambda_max must be positive, got {lmax}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if c_count < 2 {
        return Err(Error::invalid("a path needs at least two penalties"));
    }
    let step = epsilon.ln() / (c_count - 1) as f64;
    let log_max = lmax.ln();
    let mut lambdas: Vec<f64> = (0..c_count).map(|t| (log_max + step * t as f64).exp()).collect();
    lambdas[0] = lmax;
    lambdas[c_count - 1] = epsilon * lmax;
    Ok(LambdaPath {
        lambdas,
        epsilon,
        c_count,
    })
}

impl LambdaPath {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

impl CdProblem {
    /// Fits every penalty in order, warm-starting each from the previous solution.
    pub fn fit_lambdas(&mut self, lambdas: &[f64], opts: &SolverOptions) -> Result<Vec<LassoFit>> {
        let mut out: Vec<LassoFit> = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            let init = out.last().map(|f| f.standardized.clone());
            out.push(self.fit(lambda, init.as_deref(), opts)?);
        }
        Ok(out)
    }
}

/// Warm-started fits of `d` along `path`.
pub fn fit_path(d: &Dataset, path: &LambdaPath, opts: &SolverOptions) -> Result<Vec<LassoFit>> {
    CdProblem::new(d)?.fit_lambdas(&path.lambdas, opts)
}
