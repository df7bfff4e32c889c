//! Monte-Carlo check that the LASSO has the OLS sampling variance when the
//! penalty grows slower than `sqrt(n)`.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lasso::{lasso_fit, ols_fit, SolverOptions};
use crate::rng::derive_seed;

use super::design::{gen_design, DesignDist, DesignSpec};
use super::model::{gen_response, TrueModel};

/// Penalty on the unnormalised scale `sum (y - x b)^2 + lambda_n sum |b_j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaRule {
    /// Ordinary least squares.
    Zero,
    /// `lambda_n = constant * n^exponent`.
    Power { constant: f64, exponent: f64 },
}

impl LambdaRule {
    pub fn lambda_n(self, n: usize) -> f64 {
        match self {
            LambdaRule::Zero => 0.0,
            LambdaRule::Power { constant, exponent } => constant * (n as f64).powf(exponent),
        }
    }

    /// Penalty for the solver, which scales the loss by `1 / (2n)`.
    pub fn solver_lambda(self, n: usize) -> f64 {
        self.lambda_n(n) / (2.0 * n as f64)
    }

    /// Whether `lambda_n / sqrt(n) -> 0`.
    pub fn meets_condition(self) -> bool {
        match self {
            LambdaRule::Zero => true,
            LambdaRule::Power { exponent, .. } => exponent < 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    /// Support slope index and the ratio of the empirical variance of
    /// `sqrt(n) (b_hat_j - b_j)` to `sigma^2 (C^-1)_jj`.
    pub ratios: Vec<(usize, f64)>,
    pub median_ratio: f64,
    pub pass: bool,
    /// False when the rule violates the rate condition; the report is then
    /// only diagnostic.
    pub condition_met: bool,
    pub reps: usize,
    pub n: usize,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Refits the model on `reps` fresh standard-normal designs and compares the
/// spread of the support slopes with the OLS asymptotic variance.
///
/// The design is standard normal, so `C` is the identity and the target
/// variance is `sigma^2` for every slope. Passes when the median ratio lies
/// in `[0.7, 1.3]`.
pub fn asymptotic_variance_check(
    spec: &DesignSpec,
    model: &TrueModel,
    reps: usize,
    rule: LambdaRule,
) -> Result<VarianceReport> {
    if spec.dist != DesignDist::Normal {
        return Err(Error::invalid("the variance check needs a standard-normal design"));
    }
    if spec.p != model.p() {
        return Err(Error::Dimension(format!(
            "design has {} columns, model has {} slopes",
            spec.p,
            model.p()
        )));
    }
    if reps < 2 {
        return Err(Error::invalid("need at least two replications"));
    }
    let n = spec.n;
    let lambda = rule.solver_lambda(n);
    let opts = SolverOptions::default();
    let draws: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_seed(spec.seed, rep as u64);
            let cols = gen_design(&DesignSpec { seed, ..*spec });
            let y = gen_response(&cols, model, derive_seed(seed, u64::MAX))?;
            let d = Dataset::new(cols, y)?;
            let beta = match rule {
                LambdaRule::Zero => ols_fit(&d, None, true)?,
                LambdaRule::Power { .. } => lasso_fit(&d, lambda, None, &opts)?.beta(),
            };
            Ok(model
                .support
                .iter()
                .map(|&j| (n as f64).sqrt() * (beta[j + 1] - model.beta[j + 1]))
                .collect())
        })
        .collect::<Result<_>>()?;

    let target = model.sigma * model.sigma;
    let ratios: Vec<(usize, f64)> = model
        .support
        .iter()
        .enumerate()
        .map(|(t, &j)| {
            let z: Vec<f64> = draws.iter().map(|d| d[t]).collect();
            let mean = z.iter().sum::<f64>() / reps as f64;
            let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
            (j, var / target)
        })
        .collect();
    let median_ratio = median(&ratios.iter().map(|r| r.1).collect::<Vec<_>>());
    Ok(VarianceReport {
        pass: (0.7..=1.3).contains(&median_ratio),
        median_ratio,
        ratios,
        condition_met: rule.meets_condition(),
        reps,
        n,
    })
}
