use nalgebra::{DMatrix, DVector};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, solve_spd};

/// Least squares restricted to the predictor columns in `support` (all when
/// `None`), optionally with an intercept.
///
/// Returns a length `p + 1` vector: intercept (0 without one), then slopes,
/// zero off the support. Rank deficiency is handled by ridge jitter.
pub fn ols_fit(d: &Dataset, support: Option<&[usize]>, intercept: bool) -> Result<Vec<f64>> {
    let all: Vec<usize>;
    let support = match support {
        Some(s) => s,
        None => {
            all = (0..d.p()).collect();
            &all
        }
    };
    if let Some(&bad) = support.iter().find(|&&j| j >= d.p()) {
        return Err(Error::invalid(format!("support column {bad} out of range")));
    }
    let ones = vec![1.0; d.n()];
    let cols: Vec<&[f64]> = intercept
        .then_some(ones.as_slice())
        .into_iter()
        .chain(support.iter().map(|&j| d.column(j)))
        .collect();
    let mut out = vec![0.0; d.p() + 1];
    if cols.is_empty() {
        return Ok(out);
    }
    let q = cols.len();
    let g = DMatrix::from_fn(q, q, |a, b| dot(cols[a], cols[b]));
    let rhs = DVector::from_fn(q, |a, _| dot(cols[a], d.response()));
    let (sol, _) = solve_spd(&g, &rhs, "least squares");
    let offset = usize::from(intercept);
    if intercept {
        out[0] = sol[0];
    }
    for (t, &j) in support.iter().enumerate() {
        out[j + 1] = sol[t + offset];
    }
    Ok(out)
}
