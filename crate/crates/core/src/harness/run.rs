use std::time::Instant;

use log::{debug, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lasso::{cv_fit, CvParams};
use crate::rng::derive_seed;
use crate::select::{
    approx_leverage_scores, exact_leverage_scores, iboss_select, leverage_select, sis_iboss_select, sis_screen,
    uniform_select, SubdataIndex,
};
use crate::sim::{gen_design, gen_response, mse, mspe, selection_metrics, DesignDist, DesignSpec, Placement, TrueModel};
use crate::spc::{spc_fit, SpcConfig};

use super::method::Method;

/// One replicated simulation setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub dist: DesignDist,
    pub n: usize,
    pub p: usize,
    /// Subdata size.
    pub k: usize,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
    pub n_test: usize,
    pub placement: Placement,
    pub sigma: f64,
    /// Cross-validation settings; the seed is replaced per run.
    pub cv: CvParams,
    /// Sketch size for `ALEV(s)`; `None` means `20 (s + 1)`, capped at `n`.
    pub sketch_rows: Option<usize>,
}

impl Scenario {
    pub fn new(id: impl Into<String>, dist: DesignDist, n: usize, p: usize, k: usize, methods: Vec<Method>) -> Self {
        Self {
            id: id.into(),
            dist,
            n,
            p,
            k,
            methods,
            reps: 100,
            seed: 0,
            n_test: 1000,
            placement: Placement::Random,
            sigma: 1.0,
            cv: CvParams::default(),
            sketch_rows: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::invalid(format!("scenario '{}' lists no methods", self.id)));
        }
        if self.reps == 0 {
            return Err(Error::invalid(format!("scenario '{}' needs at least one replication", self.id)));
        }
        if self.n == 0 || self.p == 0 || self.n_test == 0 {
            return Err(Error::invalid(format!("scenario '{}' needs n, p, n_test >= 1", self.id)));
        }
        if self.k > self.n {
            return Err(Error::InsufficientRows {
                available: self.n,
                needed: self.k,
            });
        }
        Ok(())
    }

    pub fn settings(&self) -> MethodSettings {
        MethodSettings {
            k: self.k,
            cv: self.cv,
            sketch_rows: self.sketch_rows,
        }
    }
}

/// Outcome of one method in one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub scenario: String,
    pub method: String,
    pub replication: usize,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub select_time_s: f64,
    pub fit_time_s: f64,
    pub total_time_s: f64,
    pub mse: f64,
    pub mspe: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub chosen_lambda: f64,
    pub iterations: usize,
    /// Failure message; metrics are NaN when set.
    pub error: Option<String>,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// Copy with every timing set to zero, for byte-stable output.
    pub fn without_timings(&self) -> Self {
        Self {
            select_time_s: 0.0,
            fit_time_s: 0.0,
            total_time_s: 0.0,
            ..self.clone()
        }
    }
}

/// Data shared by every method within one replication.
pub struct Replication {
    pub train: Dataset,
    pub test: Dataset,
    pub model: TrueModel,
    pub seed: u64,
}

impl Replication {
    pub fn generate(sc: &Scenario, rep: usize) -> Result<Self> {
        let seed = derive_seed(sc.seed, rep as u64);
        let model = TrueModel::generate(sc.p, sc.placement, sc.sigma, derive_seed(seed, 1))?;
        let make = |n: usize, design_tag: u64, noise_tag: u64| -> Result<Dataset> {
            let cols = gen_design(&DesignSpec {
                dist: sc.dist,
                n,
                p: sc.p,
                seed: derive_seed(seed, design_tag),
            });
            let y = gen_response(&cols, &model, derive_seed(seed, noise_tag))?;
            Dataset::new(cols, y)
        };
        Ok(Self {
            train: make(sc.n, 2, 3)?,
            test: make(sc.n_test, 4, 5)?,
            model,
            seed,
        })
    }
}

/// Seed for `method` derived from `base`.
///
/// Uses a stable hash of the descriptor, so a method's random stream does not
/// depend on its position in the method list.
pub fn method_seed(base: u64, method: Method) -> u64 {
    let tag = method
        .to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    derive_seed(base, tag)
}

/// Everything a method needs besides the training data and a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSettings {
    /// Subdata size.
    pub k: usize,
    /// Cross-validation settings; the seed is replaced per run.
    pub cv: CvParams,
    /// Sketch size for `ALEV(s)`; `None` means `20 (s + 1)`, capped at `n`.
    pub sketch_rows: Option<usize>,
}

impl MethodSettings {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            cv: CvParams::default(),
            sketch_rows: None,
        }
    }
}

/// Coefficients and timings produced by one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    /// Intercept followed by slopes.
    pub beta: Vec<f64>,
    pub rows: Option<SubdataIndex>,
    pub select_time_s: f64,
    pub fit_time_s: f64,
    pub total_time_s: f64,
    pub chosen_lambda: f64,
    pub iterations: usize,
}

/// Rows chosen by a row-selecting method.
pub fn select_rows(method: Method, d: &Dataset, settings: &MethodSettings, seed: u64) -> Result<SubdataIndex> {
    let k = settings.k;
    match method {
        Method::Unif => uniform_select(d.n(), k, seed),
        Method::Lev => leverage_select(&exact_leverage_scores(d, None), k, seed),
        Method::LevScreened(s) => {
            let screen = sis_screen(d, s)?;
            leverage_select(&exact_leverage_scores(d, Some(&screen.selected_vars)), k, seed)
        }
        Method::ApproxLev(s) => {
            let screen = sis_screen(d, s)?;
            let vars = &screen.selected_vars;
            let sketch = settings.sketch_rows.unwrap_or(20 * (vars.len() + 1)).min(d.n());
            let scores = approx_leverage_scores(d, vars, sketch, seed)?;
            leverage_select(&scores, k, seed)
        }
        Method::DOpt => iboss_select(d, k),
        Method::SisIboss(s) => Ok(sis_iboss_select(d, k, s)?.0),
        Method::Full | Method::Spc { .. } => Err(Error::invalid(format!("{method} does not select rows"))),
    }
}

/// Runs one method on `d` with an already derived `seed`.
pub fn fit_method(method: Method, d: &Dataset, settings: &MethodSettings, seed: u64) -> Result<MethodOutcome> {
    let cv = CvParams {
        seed,
        ..settings.cv
    };
    match method {
        Method::Full => {
            let start = Instant::now();
            let (_, fit) = cv_fit(d, &cv)?;
            let t = start.elapsed().as_secs_f64();
            Ok(MethodOutcome {
                beta: fit.beta(),
                rows: None,
                select_time_s: 0.0,
                fit_time_s: t,
                total_time_s: t,
                chosen_lambda: fit.lambda,
                iterations: fit.iterations,
            })
        }
        Method::Spc { w, k } => {
            let cfg = SpcConfig {
                k_chunks: k,
                vote_threshold: w,
                seed,
                cv,
            };
            let fit = spc_fit(d, &cfg)?;
            let lambdas: Vec<f64> = fit.chunks.iter().map(|c| c.lambda).collect();
            Ok(MethodOutcome {
                beta: fit.beta,
                rows: None,
                select_time_s: 0.0,
                fit_time_s: fit.parallel_time_s,
                total_time_s: fit.parallel_time_s,
                chosen_lambda: lambdas.iter().sum::<f64>() / lambdas.len() as f64,
                iterations: fit.chunks.iter().map(|c| c.iterations).max().unwrap_or(0),
            })
        }
        _ => {
            let start = Instant::now();
            let idx = select_rows(method, d, settings, seed)?;
            let select_time_s = start.elapsed().as_secs_f64();
            let fit_start = Instant::now();
            let sub = d.subset_rows(&idx.rows);
            let (_, fit) = cv_fit(&sub, &cv)?;
            let fit_time_s = fit_start.elapsed().as_secs_f64();
            Ok(MethodOutcome {
                beta: fit.beta(),
                rows: Some(idx),
                select_time_s,
                fit_time_s,
                total_time_s: start.elapsed().as_secs_f64(),
                chosen_lambda: fit.lambda,
                iterations: fit.iterations,
            })
        }
    }
}

/// Runs one method on the replication's training data.
pub fn run_method(sc: &Scenario, method: Method, rep: &Replication) -> Result<MethodOutcome> {
    fit_method(method, &rep.train, &sc.settings(), method_seed(rep.seed, method))
}

fn record(sc: &Scenario, method: Method, rep_index: usize, rep: &Replication) -> RunRecord {
    let base = RunRecord {
        scenario: sc.id.clone(),
        method: method.to_string(),
        replication: rep_index,
        n: sc.n,
        p: sc.p,
        k: sc.k,
        select_time_s: 0.0,
        fit_time_s: 0.0,
        total_time_s: 0.0,
        mse: f64::NAN,
        mspe: f64::NAN,
        sensitivity: f64::NAN,
        specificity: f64::NAN,
        chosen_lambda: f64::NAN,
        iterations: 0,
        error: None,
    };
    let scored = run_method(sc, method, rep).and_then(|out| {
        let sel = selection_metrics(&rep.model.beta, &out.beta)?;
        Ok(RunRecord {
            select_time_s: out.select_time_s,
            fit_time_s: out.fit_time_s,
            total_time_s: out.total_time_s,
            mse: mse(&rep.test, &rep.model.beta, &out.beta)?,
            mspe: mspe(&rep.test, &out.beta)?,
            sensitivity: sel.sensitivity,
            specificity: sel.specificity,
            chosen_lambda: out.chosen_lambda,
            iterations: out.iterations,
            ..base.clone()
        })
    });
    scored.unwrap_or_else(|e| {
        warn!("{} / {} / rep {rep_index}: {e}", sc.id, method);
        RunRecord {
            error: Some(e.to_string()),
            ..base
        }
    })
}

/// Runs every method on every replication.
///
/// Replications run in parallel on the current rayon pool; within one
/// replication all methods share the same training data, true model and test
/// set. Records come back ordered by replication, then method. A failing
/// method is recorded, not propagated.
pub fn run_scenario(sc: &Scenario) -> Result<Vec<RunRecord>> {
    sc.validate()?;
    let per_rep: Vec<Vec<RunRecord>> = (0..sc.reps)
        .into_par_iter()
        .map(|r| {
            let rep = Replication::generate(sc, r)?;
            debug!("{}: replication {r}", sc.id);
            Ok(sc.methods.iter().map(|&m| record(sc, m, r, &rep)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_rep.into_iter().flatten().collect())
}
