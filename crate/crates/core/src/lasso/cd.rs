//! Cyclic coordinate descent for the LASSO.
//!
//! The solver works on standardised columns and a centred response and
//! minimises
//!
//! ```text
//! (1/2n) ||y - X b||^2 + lambda * ||b||_1
//! ```
//!
//! which is the `(1/n)`-scaled least-squares objective with penalty `2 lambda`.
//! With this scaling the coordinate update is
//! `b_j <- S(x_j^T r / n + b_j, lambda)` and the all-zero threshold is
//! `max_j |x_j^T y| / n`.
//!
//! Two sweep strategies produce the same iterates in exact arithmetic:
//! [`Strategy::Naive`] keeps the residual up to date (`O(n)` per coordinate),
//! [`Strategy::Covariance`] keeps `X^T X b / n` up to date from lazily cached
//! Gram columns (`O(p)` per coordinate once a column is cached) and
//! alternates full sweeps with sweeps over the variables that have ever been
//! nonzero.

use log::warn;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dataset::{standardize, Dataset, ScalingInfo};
use crate::error::{Error, Result};
use crate::linalg::dot;

/// Active-set sweeps before the first orthant step is attempted.
const JUMP_AFTER: usize = 3;
/// Most coefficients one orthant step may drop.
const MAX_DROPS: usize = 64;
/// Column updates applied to a cached factor before it is rebuilt.
const MAX_UPDATES: usize = 200;
/// Smallest accepted squared pivot, relative to the Gram diagonal.
const PIVOT_TOL: f64 = 1e-10;

/// Cholesky factor of the Gram block over `vars`, in that order.
struct Factor {
    vars: Vec<usize>,
    chol: Cholesky<f64, Dyn>,
    updates: usize,
}

enum Jump {
    Full,
    /// Stopped early where a coefficient reached zero.
    Blocked,
    Failed,
}

pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0);
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Full cyclic sweeps over residuals. The reference implementation.
    Naive,
    /// Covariance updates with active-set inner sweeps.
    Covariance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once a sweep moves no coefficient by more than this.
    pub tol: f64,
    /// Maximum number of sweeps.
    pub max_iter: usize,
    pub strategy: Strategy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iter: 100_000,
            strategy: Strategy::Covariance,
        }
    }
}

/// Solution on the standardised scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CdSolution {
    pub beta: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

/// A LASSO fit mapped back to the original scale.
#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub intercept: f64,
    /// Original-scale slopes, length `p`.
    pub coefficients: Vec<f64>,
    /// Slopes on the standardised scale; usable as a warm start.
    pub standardized: Vec<f64>,
    pub lambda: f64,
    /// Number of coordinate sweeps.
    pub iterations: usize,
    pub converged: bool,
    /// `(1/2n) ||r||^2 + lambda ||b||_1` on the standardised problem.
    pub objective: f64,
}

impl LassoFit {
    /// Intercept followed by slopes.
    pub fn beta(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.coefficients.len() + 1);
        b.push(self.intercept);
        b.extend_from_slice(&self.coefficients);
        b
    }

    pub fn nonzero_count(&self) -> usize {
        self.coefficients.iter().filter(|&&b| b != 0.0).count()
    }
}

/// Standardised design plus the cached quantities coordinate descent needs.
pub struct CdProblem {
    x: Dataset,
    scaling: ScalingInfo,
    n: f64,
    /// `x_j^T x_j / n`; zero for constant columns.
    col_sq: Vec<f64>,
    /// `x_j^T y / n`.
    xty: Vec<f64>,
    /// `y^T y / n`.
    yty: f64,
    gram: Vec<Option<Vec<f64>>>,
    ever_active: Vec<usize>,
    factor: Option<Factor>,
}

impl CdProblem {
    /// Standardises `d` and prepares the problem.
    pub fn new(d: &Dataset) -> Result<Self> {
        let (x, scaling) = standardize(d)?;
        Ok(Self::from_standardized(x, scaling))
    }

    pub fn from_standardized(x: Dataset, scaling: ScalingInfo) -> Self {
        let n = x.n() as f64;
        let y = x.response();
        let col_sq = x.columns().iter().map(|c| dot(c, c) / n).collect();
        let xty = x.columns().iter().map(|c| dot(c, y) / n).collect();
        let yty = dot(y, y) / n;
        let p = x.p();
        Self {
            x,
            scaling,
            n,
            col_sq,
            xty,
            yty,
            gram: vec![None; p],
            ever_active: Vec::new(),
            factor: None,
        }
    }

    pub fn standardized(&self) -> &Dataset {
        &self.x
    }

    pub fn scaling(&self) -> &ScalingInfo {
        &self.scaling
    }

    pub fn p(&self) -> usize {
        self.x.p()
    }

    /// Smallest penalty with an all-zero solution.
    pub fn lambda_max(&self) -> f64 {
        self.xty.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Solves at `lambda` and maps the result to the original scale.
    pub fn fit(&mut self, lambda: f64, init: Option<&[f64]>, opts: &SolverOptions) -> Result<LassoFit> {
        let sol = self.solve(lambda, init, opts)?;
        Ok(self.to_fit(sol, lambda))
    }

    pub fn to_fit(&self, sol: CdSolution, lambda: f64) -> LassoFit {
        let beta = self.scaling.to_original(&sol.beta);
        LassoFit {
            intercept: beta[0],
            coefficients: beta[1..].to_vec(),
            standardized: sol.beta,
            lambda,
            iterations: sol.iterations,
            converged: sol.converged,
            objective: sol.objective,
        }
    }

    /// Solves at `lambda` on the standardised scale, starting from `init`.
    pub fn solve(&mut self, lambda: f64, init: Option<&[f64]>, opts: &SolverOptions) -> Result<CdSolution> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let p = self.p();
        let mut beta = match init {
            Some(b) if b.len() != p => {
                return Err(Error::Dimension(format!("initial vector has {} entries, p = {p}", b.len())))
            }
            Some(b) => b.to_vec(),
            None => vec![0.0; p],
        };
        for (b, &s) in beta.iter_mut().zip(&self.col_sq) {
            if s == 0.0 {
                *b = 0.0;
            }
        }
        let sol = match opts.strategy {
            Strategy::Naive => self.solve_naive(lambda, beta, opts),
            Strategy::Covariance => self.solve_covariance(lambda, beta, opts),
        };
        if !sol.converged {
            warn!(
                "coordinate descent did not converge at lambda = {lambda:.4e} after {} sweeps",
                sol.iterations
            );
        }
        Ok(sol)
    }

    fn penalty(lambda: f64, beta: &[f64]) -> f64 {
        lambda * beta.iter().map(|b| b.abs()).sum::<f64>()
    }

    fn solve_naive(&self, lambda: f64, mut beta: Vec<f64>, opts: &SolverOptions) -> CdSolution {
        let x = &self.x;
        let mut r = x.response().to_vec();
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                axpy(-b, x.column(j), &mut r);
            }
        }
        let objective = |r: &[f64], beta: &[f64]| 0.5 * dot(r, r) / self.n + Self::penalty(lambda, beta);
        let mut last_obj = objective(&r, &beta);

        let mut iterations = 0;
        let mut converged = false;
        while iterations < opts.max_iter {
            iterations += 1;
            let mut max_delta: f64 = 0.0;
            for j in 0..beta.len() {
                let s = self.col_sq[j];
                if s == 0.0 {
                    continue;
                }
                let col = x.column(j);
                let old = beta[j];
                let z = dot(col, &r) / self.n + s * old;
                let new = soft_threshold(z, lambda) / s;
                if new != old {
                    axpy(old - new, col, &mut r);
                    beta[j] = new;
                    max_delta = max_delta.max((new - old).abs());
                }
            }
            if cfg!(debug_assertions) {
                let obj = objective(&r, &beta);
                debug_assert!(
                    obj <= last_obj + 1e-10 * (1.0 + last_obj.abs()),
                    "objective increased from {last_obj} to {obj}"
                );
                last_obj = obj;
            }
            if max_delta < opts.tol {
                converged = true;
                break;
            }
        }
        CdSolution {
            objective: objective(&r, &beta),
            beta,
            iterations,
            converged,
        }
    }

    fn ensure_gram(&mut self, j: usize) {
        if self.gram[j].is_none() {
            let cj = self.x.column(j);
            let col = self.x.columns().iter().map(|c| dot(c, cj) / self.n).collect();
            self.gram[j] = Some(col);
            self.ever_active.push(j);
        }
    }

    /// `(1/2)(y'y/n - 2 b'X'y/n + b'X'Xb/n) + lambda ||b||_1`, given `q = X'X b / n`.
    fn covariance_objective(&self, lambda: f64, beta: &[f64], q: &[f64]) -> f64 {
        let loss = 0.5 * (self.yty - 2.0 * dot(&self.xty, beta) + dot(beta, q));
        loss.max(0.0) + Self::penalty(lambda, beta)
    }

    fn solve_covariance(&mut self, lambda: f64, mut beta: Vec<f64>, opts: &SolverOptions) -> CdSolution {
        let p = beta.len();
        let mut q = vec![0.0; p];
        for j in 0..p {
            if beta[j] != 0.0 {
                self.ensure_gram(j);
                axpy(beta[j], self.gram[j].as_deref().unwrap(), &mut q);
            }
        }
        let mut last_obj = self.covariance_objective(lambda, &beta, &q);

        let mut iterations = 0;
        let mut converged = false;
        let mut check = |this: &Self, beta: &[f64], q: &[f64]| {
            if cfg!(debug_assertions) {
                let obj = this.covariance_objective(lambda, beta, q);
                debug_assert!(
                    obj <= last_obj + 1e-10 * (1.0 + last_obj.abs()),
                    "objective increased from {last_obj} to {obj}"
                );
                last_obj = obj;
            }
        };

        'outer: while iterations < opts.max_iter {
            iterations += 1;
            let mut max_delta: f64 = 0.0;
            for j in 0..p {
                max_delta = max_delta.max(self.update_coordinate(j, lambda, &mut beta, &mut q));
            }
            check(self, &beta, &q);
            if max_delta < opts.tol {
                converged = true;
                break;
            }
            let mut inner = 0;
            let mut next_jump = JUMP_AFTER;
            while iterations < opts.max_iter {
                iterations += 1;
                inner += 1;
                let mut max_delta: f64 = 0.0;
                for t in 0..self.ever_active.len() {
                    let j = self.ever_active[t];
                    max_delta = max_delta.max(self.update_coordinate(j, lambda, &mut beta, &mut q));
                }
                check(self, &beta, &q);
                if max_delta < opts.tol {
                    continue 'outer;
                }
                if inner == next_jump {
                    let step = self.orthant_step(lambda, &mut beta, &mut q);
                    next_jump = match step {
                        Jump::Full | Jump::Blocked => inner + JUMP_AFTER,
                        Jump::Failed => 2 * inner,
                    };
                    check(self, &beta, &q);
                }
            }
        }
        CdSolution {
            objective: self.covariance_objective(lambda, &beta, &q),
            beta,
            iterations,
            converged,
        }
    }

    /// Active-set Newton steps on the current orthant.
    ///
    /// The objective restricted to the current sign pattern is a quadratic;
    /// this moves towards its minimiser, and whenever a coefficient would
    /// change sign it stops there, drops that coefficient and re-solves on the
    /// smaller set (Cholesky downdate). It only shortcuts the slow tail of
    /// coordinate descent on ill-conditioned problems: every accepted move
    /// lowers the objective and the sweeps that follow certify optimality.
    fn orthant_step(&mut self, lambda: f64, beta: &mut [f64], q: &mut [f64]) -> Jump {
        if !self.refresh_factor(beta) {
            return Jump::Failed;
        }
        let mut outcome = Jump::Failed;
        for _ in 0..MAX_DROPS {
            let Some(factor) = self.factor.as_ref() else {
                return outcome;
            };
            let active = factor.vars.clone();
            let signs: Vec<f64> = active.iter().map(|&j| beta[j].signum()).collect();
            let rhs = DVector::from_fn(active.len(), |a, _| self.xty[active[a]] - lambda * signs[a]);
            let target = factor.chol.solve(&rhs);
            if target.iter().any(|v| !v.is_finite()) {
                self.factor = None;
                return outcome;
            }
            let before = self.covariance_objective(lambda, beta, q);
            let mut step: f64 = 1.0;
            let mut blocking = None;
            for (a, &j) in active.iter().enumerate() {
                if target[a] * signs[a] <= 0.0 {
                    let t = beta[j] / (beta[j] - target[a]);
                    if t < step {
                        step = t;
                        blocking = Some(a);
                    }
                }
            }
            let Some(drop) = blocking else {
                return match self.try_move(lambda, beta, q, &active, |a| target[a], before, Jump::Full) {
                    Jump::Failed => outcome,
                    full => full,
                };
            };
            let current: Vec<f64> = active.iter().map(|&j| beta[j]).collect();
            let moved = self.try_move(
                lambda,
                beta,
                q,
                &active,
                |a| if a == drop { 0.0 } else { current[a] + step * (target[a] - current[a]) },
                before,
                Jump::Blocked,
            );
            if matches!(moved, Jump::Failed) {
                return outcome;
            }
            outcome = Jump::Blocked;
            let factor = self.factor.as_mut().expect("factor present");
            factor.vars.remove(drop);
            factor.chol = factor.chol.remove_column(drop);
            factor.updates += 1;
            if factor.vars.is_empty() {
                self.factor = None;
                return outcome;
            }
        }
        outcome
    }

    /// Brings the cached Cholesky factor in line with the nonzero
    /// coefficients of `beta`, updating it column by column when the active
    /// set changed little and refactoring otherwise.
    fn refresh_factor(&mut self, beta: &[f64]) -> bool {
        let nonzero: Vec<usize> = (0..beta.len()).filter(|&j| beta[j] != 0.0).collect();
        if nonzero.is_empty() {
            self.factor = None;
            return false;
        }
        if let Some(mut factor) = self.factor.take() {
            let mut member = vec![false; beta.len()];
            for &j in &nonzero {
                member[j] = true;
            }
            let stale: Vec<usize> = (0..factor.vars.len()).filter(|&a| !member[factor.vars[a]]).collect();
            for &j in &factor.vars {
                member[j] = false;
            }
            let fresh: Vec<usize> = nonzero.iter().copied().filter(|&j| member[j]).collect();
            let changes = stale.len() + fresh.len();
            if factor.updates + changes <= MAX_UPDATES && changes <= nonzero.len() / 4 + 4 {
                for &a in stale.iter().rev() {
                    factor.vars.remove(a);
                    factor.chol = factor.chol.remove_column(a);
                }
                let mut ok = true;
                for &j in &fresh {
                    let g = self.gram[j].as_deref().expect("active column cached");
                    let m = factor.vars.len();
                    let col = DVector::from_fn(m + 1, |a, _| if a < m { g[factor.vars[a]] } else { g[j] });
                    let chol = factor.chol.insert_column(m, col);
                    let d = chol.l_dirty()[(m, m)];
                    if !(d.is_finite() && d * d > PIVOT_TOL * g[j]) {
                        ok = false;
                        break;
                    }
                    factor.chol = chol;
                    factor.vars.push(j);
                }
                factor.updates += changes;
                if ok {
                    self.factor = Some(factor);
                    return true;
                }
            }
        }
        let m = nonzero.len();
        let g = DMatrix::from_fn(m, m, |a, b| {
            self.gram[nonzero[b]].as_deref().expect("active column cached")[nonzero[a]]
        });
        self.factor = g.cholesky().map(|chol| Factor {
            vars: nonzero,
            chol,
            updates: 0,
        });
        self.factor.is_some()
    }

    /// Replaces the active coefficients by `value(a)` if that does not
    /// increase the objective.
    #[allow(clippy::too_many_arguments)]
    fn try_move(
        &self,
        lambda: f64,
        beta: &mut [f64],
        q: &mut [f64],
        active: &[usize],
        value: impl Fn(usize) -> f64,
        before: f64,
        outcome: Jump,
    ) -> Jump {
        let mut next = beta.to_vec();
        let mut next_q = q.to_vec();
        for (a, &j) in active.iter().enumerate() {
            let v = value(a);
            axpy(v - beta[j], self.gram[j].as_deref().unwrap(), &mut next_q);
            next[j] = v;
        }
        if self.covariance_objective(lambda, &next, &next_q) > before {
            return Jump::Failed;
        }
        beta.copy_from_slice(&next);
        q.copy_from_slice(&next_q);
        outcome
    }

    #[inline]
    fn update_coordinate(&mut self, j: usize, lambda: f64, beta: &mut [f64], q: &mut [f64]) -> f64 {
        let s = self.col_sq[j];
        if s == 0.0 {
            return 0.0;
        }
        let old = beta[j];
        let z = self.xty[j] - q[j] + s * old;
        let new = soft_threshold(z, lambda) / s;
        if new == old {
            return 0.0;
        }
        self.ensure_gram(j);
        axpy(new - old, self.gram[j].as_deref().unwrap(), q);
        beta[j] = new;
        (new - old).abs()
    }
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// LASSO fit of `d` at a single `lambda`.
///
/// Columns are standardised internally (population sd), the response centred,
/// and the returned coefficients mapped back to the original scale. `init`
/// is a warm start on the standardised scale.
pub fn lasso_fit(
    d: &Dataset,
    lambda: f64,
    init: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<LassoFit> {
    CdProblem::new(d)?.fit(lambda, init, opts)
}

/// Largest violation of the LASSO optimality conditions at `beta` for the
/// standardised problem `x` (response centred):
/// `|x_j^T r / n| <= lambda` where `b_j = 0`, `x_j^T r / n = lambda sign(b_j)` otherwise.
pub fn kkt_violation(x: &Dataset, beta: &[f64], lambda: f64) -> f64 {
    let n = x.n() as f64;
    let mut r = x.response().to_vec();
    for (j, &b) in beta.iter().enumerate() {
        if b != 0.0 {
            axpy(-b, x.column(j), &mut r);
        }
    }
    beta.iter()
        .enumerate()
        .map(|(j, &b)| {
            let g = dot(x.column(j), &r) / n;
            if b == 0.0 {
                (g.abs() - lambda).max(0.0)
            } else {
                (g - lambda * b.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::Strategy;
    use crate::rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_problem(n: usize, p: usize, seed: u64, corr: f64) -> Dataset {
        let mut r = rng::rng(seed);
        let common: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut r)).collect();
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| {
                (0..n)
                    .map(|i| corr * common[i] + rng::standard_normal(&mut r))
                    .collect()
            })
            .collect();
        let y = (0..n)
            .map(|i| 1.5 * cols[0][i] - 0.7 * cols[p - 1][i] + rng::standard_normal(&mut r))
            .collect();
        Dataset::new(cols, y).unwrap()
    }

    fn naive() -> SolverOptions {
        SolverOptions { strategy: Strategy::Naive, ..Default::default() }
    }

    #[test]
    fn soft_threshold_cases() {
        assert_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_eq!(soft_threshold(-0.5, 1.0), 0.0);
        assert_eq!(soft_threshold(-3.0, 1.0), -2.0);
        assert_eq!(soft_threshold(1.0, 1.0), 0.0);
    }

    #[test]
    fn zero_lambda_gives_least_squares() {
        let d = random_problem(10, 2, 1, 0.0);
        // Least-squares oracle through the normal equations of [1, X].
        let x = nalgebra::DMatrix::from_fn(10, 3, |i, a| if a == 0 { 1.0 } else { d.value(i, a - 1) });
        let y = nalgebra::DVector::from_column_slice(d.response());
        let ls = (x.transpose() * &x).lu().solve(&(x.transpose() * y)).unwrap();
        for strategy in [Strategy::Naive, Strategy::Covariance] {
            let opts = SolverOptions { tol: 1e-12, strategy, ..Default::default() };
            let fit = lasso_fit(&d, 0.0, None, &opts).unwrap();
            assert!(fit.converged);
            for (a, b) in fit.beta().iter().zip(ls.iter()) {
                assert!((a - b).abs() < 1e-6, "{a} vs {b}");
            }
        }
    }

    /// Columns with mean 0 and `X^T X / n = I`, built from a sign pattern.
    fn orthonormal(n_blocks: usize) -> Vec<Vec<f64>> {
        // Hadamard-like columns of length 8 * n_blocks.
        let h = [
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0],
            [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0],
        ];
        (1..5).map(|c| (0..8 * n_blocks).map(|i| h[c][i % 8]).collect()).collect()
    }

    #[test]
    fn orthonormal_design_has_closed_form() {
        let cols = orthonormal(3);
        let y: Vec<f64> = (0..24).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.3).collect();
        let y_mean = y.iter().sum::<f64>() / 24.0;
        let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
        let d = Dataset::new(cols.clone(), y).unwrap();
        for lambda in [0.0, 0.05, 0.2, 0.5] {
            for opts in [naive(), SolverOptions::default()] {
                let fit = lasso_fit(&d, lambda, None, &opts).unwrap();
                for (j, col) in cols.iter().enumerate() {
                    let want = soft_threshold(dot(col, &yc) / 24.0, lambda);
                    assert!((fit.coefficients[j] - want).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn matches_grid_search_on_correlated_pair() {
        let d = random_problem(40, 2, 3, 1.5);
        let lambda = 0.1;
        let mut prob = CdProblem::new(&d).unwrap();
        let sol = prob.solve(lambda, None, &naive()).unwrap();
        let x = prob.standardized().clone();
        let obj = |b0: f64, b1: f64| {
            let r: Vec<f64> = (0..40)
                .map(|i| x.response()[i] - b0 * x.value(i, 0) - b1 * x.value(i, 1))
                .collect();
            0.5 * dot(&r, &r) / 40.0 + lambda * (b0.abs() + b1.abs())
        };
        // Coarse grid over [-3, 3]^2 then a 1e-3 refinement around the best cell.
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for a in -300..=300 {
            for b in -300..=300 {
                let (b0, b1) = (a as f64 * 0.01, b as f64 * 0.01);
                let v = obj(b0, b1);
                if v < best.0 {
                    best = (v, b0, b1);
                }
            }
        }
        let (_, c0, c1) = best;
        for a in -10..=10 {
            for b in -10..=10 {
                let (b0, b1) = (c0 + a as f64 * 1e-3, c1 + b as f64 * 1e-3);
                let v = obj(b0, b1);
                if v < best.0 {
                    best = (v, b0, b1);
                }
            }
        }
        assert!((sol.objective - best.0).abs() < 1e-4);
        assert!(sol.objective <= best.0 + 1e-12);
    }

    #[test]
    fn zero_response_gives_zero_fit() {
        let mut d = random_problem(30, 4, 4, 0.0);
        d = d.with_response(vec![0.0; 30]).unwrap();
        let fit = lasso_fit(&d, 0.01, None, &SolverOptions::default()).unwrap();
        assert!(fit.coefficients.iter().all(|&b| b == 0.0));
        assert_eq!(fit.intercept, 0.0);
    }

    #[test]
    fn constant_column_stays_zero() {
        let mut cols = random_problem(30, 3, 5, 0.0).columns().to_vec();
        cols[1] = vec![4.0; 30];
        let d = Dataset::new(cols, random_problem(30, 3, 6, 0.0).response().to_vec()).unwrap();
        for opts in [naive(), SolverOptions::default()] {
            let fit = lasso_fit(&d, 0.0, Some(&[0.0, 3.0, 0.0]), &opts).unwrap();
            assert_eq!(fit.coefficients[1], 0.0);
        }
    }

    #[test]
    fn converged_fit_is_a_fixed_point() {
        let d = random_problem(60, 8, 7, 0.8);
        let mut prob = CdProblem::new(&d).unwrap();
        let opts = naive();
        let sol = prob.solve(0.05, None, &opts).unwrap();
        assert!(sol.converged);
        let again = prob
            .solve(0.05, Some(&sol.beta), &SolverOptions { max_iter: 1, ..opts })
            .unwrap();
        for (a, b) in sol.beta.iter().zip(&again.beta) {
            assert!((a - b).abs() <= opts.tol);
        }
    }

    #[test]
    fn strategies_agree_to_objective_precision() {
        for seed in 0..20 {
            let d = random_problem(80, 12, seed, 1.0);
            let mut prob = CdProblem::new(&d).unwrap();
            let lmax = prob.lambda_max();
            for frac in [0.5, 0.1, 0.01] {
                let a = prob.solve(frac * lmax, None, &naive()).unwrap();
                let b = prob.solve(frac * lmax, None, &SolverOptions::default()).unwrap();
                assert!((a.objective - b.objective).abs() < 1e-10);
                // Objective reported by the fast path equals the residual form.
                let mut r = prob.standardized().response().to_vec();
                for (j, &bj) in b.beta.iter().enumerate() {
                    axpy(-bj, prob.standardized().column(j), &mut r);
                }
                let direct = 0.5 * dot(&r, &r) / 80.0 + CdProblem::penalty(frac * lmax, &b.beta);
                assert!((direct - b.objective).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wide_warm_path_satisfies_kkt() {
        // p close to n with correlated columns: the tail of the path is where
        // the active-set steps and the cached factor do their work.
        let d = random_problem(60, 70, 11, 1.5);
        let mut prob = CdProblem::new(&d).unwrap();
        let lmax = prob.lambda_max();
        let mut warm: Option<Vec<f64>> = None;
        for t in 0..40 {
            let lambda = lmax * 10f64.powf(-3.0 * t as f64 / 39.0);
            let sol = prob.solve(lambda, warm.as_deref(), &SolverOptions::default()).unwrap();
            assert!(sol.converged, "lambda {lambda}");
            assert!(kkt_violation(prob.standardized(), &sol.beta, lambda) < 1e-6, "lambda {lambda}");
            let cold = prob.solve(lambda, None, &naive()).unwrap();
            assert!((cold.objective - sol.objective).abs() < 1e-8 * (1.0 + cold.objective));
            warm = Some(sol.beta);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let d = random_problem(20, 3, 8, 0.0);
        let opts = SolverOptions::default();
        assert!(lasso_fit(&d, -1.0, None, &opts).is_err());
        assert!(lasso_fit(&d, 0.1, Some(&[0.0]), &opts).is_err());
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let d = random_problem(50, 10, 9, 2.0);
        let opts = SolverOptions { max_iter: 1, tol: 1e-14, ..naive() };
        let fit = lasso_fit(&d, 1e-4, None, &opts).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn kkt_holds_at_solution(seed in 0u64..10_000, n in 10usize..60, p in 1usize..8, frac in 0.0f64..1.0) {
            let d = random_problem(n, p, seed, 0.5);
            let mut prob = CdProblem::new(&d).unwrap();
            let lambda = frac * prob.lambda_max();
            let sol = prob.solve(lambda, None, &SolverOptions::default()).unwrap();
            prop_assert!(sol.converged);
            prop_assert!(kkt_violation(prob.standardized(), &sol.beta, lambda) < 1e-6);
        }

        #[test]
        fn penalty_scales_with_response(seed in 0u64..10_000, c in 0.1f64..10.0) {
            let d = random_problem(40, 5, seed, 0.3);
            let scaled = d.with_response(d.response().iter().map(|v| c * v).collect()).unwrap();
            let opts = SolverOptions { tol: 1e-12, ..Default::default() };
            let lambda = 0.3 * CdProblem::new(&d).unwrap().lambda_max();
            let a = lasso_fit(&d, lambda, None, &opts).unwrap();
            let b = lasso_fit(&scaled, c * lambda, None, &opts).unwrap();
            for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
                prop_assert!((c * x - y).abs() < 1e-8 * c.max(1.0));
            }
        }

        #[test]
        fn random_starts_reach_same_solution(seed in 0u64..10_000) {
            let d = random_problem(50, 6, seed, 0.5);
            let mut prob = CdProblem::new(&d).unwrap();
            let lambda = 0.2 * prob.lambda_max();
            let opts = SolverOptions { tol: 1e-10, ..Default::default() };
            let base = prob.solve(lambda, None, &opts).unwrap();
            let mut r = rng::rng(seed ^ 0xABCD);
            let init: Vec<f64> = (0..6).map(|_| r.random_range(-2.0..2.0)).collect();
            let other = prob.solve(lambda, Some(&init), &opts).unwrap();
            for (a, b) in base.beta.iter().zip(&other.beta) {
                prop_assert!((a - b).abs() < 1e-6);
            }
        }
    }
}
