//! Statistical leverage scores `h_i = z_i^T (Z^T Z)^{-1} z_i`, exact and sketched.

use nalgebra::DMatrix;
use rand::RngCore;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_with_jitter, dot};
use crate::rng;

/// Random projection used by [`approx_leverage_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sketch {
    /// Dense `rows x n` matrix of independent `+-1/sqrt(rows)` entries.
    Sign { rows: usize, seed: u64 },
    /// No projection; reproduces the exact scores.
    Identity,
}

fn design<'a>(d: &'a Dataset, vars: &[usize], ones: &'a [f64]) -> Vec<&'a [f64]> {
    std::iter::once(ones)
        .chain(vars.iter().map(|&j| d.column(j)))
        .collect()
}

/// Row-major copy of a lower-triangular factor.
fn lower_rows(l: &DMatrix<f64>) -> Vec<f64> {
    let q = l.nrows();
    let mut out = vec![0.0; q * q];
    for a in 0..q {
        for b in 0..=a {
            out[a * q + b] = l[(a, b)];
        }
    }
    out
}

/// `||L^{-1} z_i||^2` for every row `z_i` of the column-stored design.
fn scores_from_factor(columns: &[&[f64]], lower: &DMatrix<f64>) -> Vec<f64> {
    let q = columns.len();
    let l = lower_rows(lower);
    let n = columns[0].len();
    let mut w = vec![0.0; q];
    (0..n)
        .map(|i| {
            let mut h = 0.0;
            for a in 0..q {
                let row = &l[a * q..a * q + a];
                let v = (columns[a][i] - dot(row, &w[..a])) / l[a * q + a];
                w[a] = v;
                h += v * v;
            }
            h.clamp(0.0, 1.0)
        })
        .collect()
}

/// Diagonal of the hat matrix of the design whose columns are given
/// (no intercept is added).
pub fn hat_diagonal(columns: &[&[f64]]) -> Vec<f64> {
    let q = columns.len();
    let mut g = DMatrix::<f64>::zeros(q, q);
    for a in 0..q {
        for b in a..q {
            let v = dot(columns[a], columns[b]);
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    let (chol, _) = cholesky_with_jitter(&g, "leverage scores");
    scores_from_factor(columns, &chol.l())
}

/// Exact leverage scores of the design `[1, X_vars]`; all columns when
/// `vars` is `None`.
pub fn exact_leverage_scores(d: &Dataset, vars: Option<&[usize]>) -> Vec<f64> {
    let all: Vec<usize>;
    let vars = match vars {
        Some(v) => v,
        None => {
            all = (0..d.p()).collect();
            &all
        }
    };
    let ones = vec![1.0; d.n()];
    hat_diagonal(&design(d, vars, &ones))
}

/// Approximate leverage scores of `[1, X_vars]` from a sign sketch with
/// `sketch_rows` rows.
pub fn approx_leverage_scores(
    d: &Dataset,
    vars: &[usize],
    sketch_rows: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    approx_leverage_with(d, vars, Sketch::Sign { rows: sketch_rows, seed })
}

/// Sketches the design, orthogonalises the sketch (`S Z = Q R`) and returns
/// the squared row norms of `Z R^{-1}`.
pub fn approx_leverage_with(d: &Dataset, vars: &[usize], sketch: Sketch) -> Result<Vec<f64>> {
    let ones = vec![1.0; d.n()];
    let cols = design(d, vars, &ones);
    let q = cols.len();
    let n = d.n();

    let sketched = match sketch {
        Sketch::Identity => DMatrix::from_fn(n, q, |i, a| cols[a][i]),
        Sketch::Sign { rows: m, seed } => {
            if m < q {
                return Err(Error::invalid(format!(
                    "sketch needs at least {q} rows, got {m}"
                )));
            }
            let mut rng = rng::rng(seed);
            let mut acc = vec![0.0; m * q];
            let mut z = vec![0.0; q];
            let mut bits = 0u64;
            for i in 0..n {
                for (a, c) in cols.iter().enumerate() {
                    z[a] = c[i];
                }
                for t in 0..m {
                    if t % 64 == 0 {
                        bits = rng.next_u64();
                    }
                    let row = &mut acc[t * q..(t + 1) * q];
                    if bits & 1 == 1 {
                        row.iter_mut().zip(&z).for_each(|(r, v)| *r += v);
                    } else {
                        row.iter_mut().zip(&z).for_each(|(r, v)| *r -= v);
                    }
                    bits >>= 1;
                }
            }
            let scale = 1.0 / (m as f64).sqrt();
            DMatrix::from_row_iterator(m, q, acc.into_iter().map(|v| v * scale))
        }
    };

    let r = sketched.clone().qr().r();
    let diag_max = (0..q).map(|a| r[(a, a)].abs()).fold(0.0, f64::max);
    let well_posed = (0..q).all(|a| r[(a, a)].abs() > 1e-12 * diag_max.max(f64::MIN_POSITIVE));
    let lower = if well_posed {
        r.transpose()
    } else {
        let g = sketched.transpose() * &sketched;
        cholesky_with_jitter(&g, "approximate leverage").0.l()
    };
    Ok(scores_from_factor(&cols, &lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand_distr::{Distribution, StandardNormal};

    fn random_dataset(n: usize, p: usize, seed: u64) -> Dataset {
        let mut r = rng::rng(seed);
        let cols = (0..p)
            .map(|_| (0..n).map(|_| StandardNormal.sample(&mut r)).collect())
            .collect();
        Dataset::new(cols, vec![0.0; n]).unwrap()
    }

    /// diag(X (X^T X)^{-1} X^T) through an explicit LU inverse.
    fn oracle(d: &Dataset) -> Vec<f64> {
        let x = DMatrix::from_fn(d.n(), d.p() + 1, |i, a| if a == 0 { 1.0 } else { d.value(i, a - 1) });
        let inv = (x.transpose() * &x).try_inverse().unwrap();
        let h = &x * inv * x.transpose();
        (0..d.n()).map(|i| h[(i, i)]).collect()
    }

    #[test]
    fn symmetric_two_point_design() {
        let col = [1.0, 1.0];
        for h in hat_diagonal(&[&col]) {
            assert!((h - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_explicit_inverse() {
        let d = random_dataset(20, 3, 4);
        for (a, b) in exact_leverage_scores(&d, None).iter().zip(oracle(&d)) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn scores_sum_to_rank() {
        let d = random_dataset(60, 6, 5);
        let h = exact_leverage_scores(&d, Some(&[0, 2, 5]));
        assert!((h.iter().sum::<f64>() - 4.0).abs() < 1e-8);
        assert!(h.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn collinear_design_falls_back_to_jitter() {
        let d = Dataset::new(vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]], vec![0.0; 3]).unwrap();
        let h = exact_leverage_scores(&d, None);
        assert!(h.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v)));
        assert!((h.iter().sum::<f64>() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn identity_sketch_is_exact() {
        let d = random_dataset(50, 4, 6);
        let exact = exact_leverage_scores(&d, Some(&[0, 1, 2, 3]));
        let approx = approx_leverage_with(&d, &[0, 1, 2, 3], Sketch::Identity).unwrap();
        for (a, b) in exact.iter().zip(&approx) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn sketch_too_small_is_rejected() {
        let d = random_dataset(50, 4, 6);
        assert!(approx_leverage_scores(&d, &[0, 1, 2, 3], 4, 0).is_err());
    }

    #[test]
    fn sign_sketch_median_error_is_small() {
        let d = random_dataset(500, 10, 7);
        let vars: Vec<usize> = (0..10).collect();
        let exact = exact_leverage_scores(&d, Some(&vars));
        let mut errs = Vec::new();
        for seed in 0..50 {
            let approx = approx_leverage_scores(&d, &vars, 200, seed).unwrap();
            errs.extend(exact.iter().zip(&approx).map(|(e, a)| (a - e).abs() / e));
        }
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = errs[errs.len() / 2];
        assert!(median < 0.25, "median relative error {median}");
    }
}
