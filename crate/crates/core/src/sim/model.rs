use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

/// Mean of the nonzero true slopes: `sqrt(ln 5000 / 1000) / 2`.
pub fn beta_star() -> f64 {
    (5000f64.ln() / 1000.0).sqrt() / 2.0
}

/// Number of true nonzero slopes, `floor(sqrt p) + 1`, capped at `p`.
pub fn p_star(p: usize) -> usize {
    (p.isqrt() + 1).min(p)
}

/// Where the true nonzero slopes sit among the `p` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    #[default]
    Random,
    /// Columns `0..p*`.
    First,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Placement::Random => "random",
            Placement::First => "first",
        })
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(Self::Random),
            "first" => Ok(Self::First),
            other => Err(Error::invalid(format!("unknown placement '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrueModel {
    /// Intercept first, then `p` slopes.
    pub beta: Vec<f64>,
    /// Sorted predictor indices (0-based) of the nonzero slopes.
    pub support: Vec<usize>,
    pub p_star: usize,
    pub sigma: f64,
}

impl TrueModel {
    pub fn p(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn generate(p: usize, placement: Placement, sigma: f64, seed: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("a model needs at least one predictor"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid(format!("noise sd must be positive, got {sigma}")));
        }
        let mut r = rng::rng(seed);
        let ps = p_star(p);
        let mut support = match placement {
            Placement::Random => index::sample(&mut r, p, ps).into_vec(),
            Placement::First => (0..ps).collect(),
        };
        support.sort_unstable();
        let bs = beta_star();
        let law = Normal::new(bs, bs / 5.0).expect("valid normal");
        let mut beta = vec![0.0; p + 1];
        for &j in &support {
            beta[j + 1] = law.sample(&mut r);
        }
        Ok(Self {
            beta,
            support,
            p_star: ps,
            sigma,
        })
    }
}

/// Random-support model with unit noise.
pub fn gen_true_model(p: usize, seed: u64) -> Result<TrueModel> {
    TrueModel::generate(p, Placement::Random, 1.0, seed)
}

/// `y = X beta + eps` with `eps ~ N(0, sigma^2)`.
pub fn gen_response(columns: &[Vec<f64>], model: &TrueModel, seed: u64) -> Result<Vec<f64>> {
    if columns.len() != model.p() {
        return Err(Error::Dimension(format!(
            "design has {} columns, model has {} slopes",
            columns.len(),
            model.p()
        )));
    }
    let n = columns.first().map_or(0, Vec::len);
    let mut y = vec![model.beta[0]; n];
    for &j in &model.support {
        let b = model.beta[j + 1];
        for (yi, xi) in y.iter_mut().zip(&columns[j]) {
            *yi += b * xi;
        }
    }
    let mut r = rng::rng(seed);
    for yi in &mut y {
        let e: f64 = StandardNormal.sample(&mut r);
        *yi += model.sigma * e;
    }
    Ok(y)
}
