//! Small dense linear-algebra helpers on top of nalgebra.

use log::warn;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dataset::Dataset;

/// `sum_i z_i z_i^T` over the given rows, where `z_i = (1, x_i[cols])`.
///
/// With `rows = None` all rows are used.
pub fn gram_with_intercept(d: &Dataset, rows: Option<&[usize]>, cols: &[usize]) -> DMatrix<f64> {
    let q = cols.len() + 1;
    let mut g = DMatrix::<f64>::zeros(q, q);
    let n_rows = rows.map_or(d.n(), <[usize]>::len);
    g[(0, 0)] = n_rows as f64;
    let row_at = |t: usize| rows.map_or(t, |r| r[t]);
    for (a, &ja) in cols.iter().enumerate() {
        let ca = d.column(ja);
        let mut s = 0.0;
        for t in 0..n_rows {
            s += ca[row_at(t)];
        }
        g[(0, a + 1)] = s;
        g[(a + 1, 0)] = s;
        for (b, &jb) in cols.iter().enumerate().skip(a) {
            let cb = d.column(jb);
            let mut s = 0.0;
            for t in 0..n_rows {
                let i = row_at(t);
                s += ca[i] * cb[i];
            }
            g[(a + 1, b + 1)] = s;
            g[(b + 1, a + 1)] = s;
        }
    }
    g
}

/// Cholesky factor of a symmetric PSD matrix, adding ridge jitter
/// `1e-10 * trace / dim` to the diagonal (growing tenfold per retry) when the
/// plain factorisation fails. The flag reports whether jitter was needed.
pub fn cholesky_with_jitter(m: &DMatrix<f64>, what: &str) -> (Cholesky<f64, Dyn>, bool) {
    if let Some(c) = m.clone().cholesky() {
        return (c, false);
    }
    let dim = m.nrows().max(1) as f64;
    let trace = m.trace().abs().max(f64::MIN_POSITIVE);
    let mut jitter = 1e-10 * trace / dim;
    loop {
        let mut shifted = m.clone();
        for i in 0..m.nrows() {
            shifted[(i, i)] += jitter;
        }
        if let Some(c) = shifted.cholesky() {
            warn!("{what}: singular Gram matrix, added ridge jitter {jitter:.3e}");
            return (c, true);
        }
        jitter *= 10.0;
        assert!(jitter.is_finite(), "{what}: jitter diverged");
    }
}

/// Solves `m x = rhs` for symmetric PSD `m`, with the jitter fallback.
pub fn solve_spd(m: &DMatrix<f64>, rhs: &DVector<f64>, what: &str) -> (DVector<f64>, bool) {
    let (chol, jittered) = cholesky_with_jitter(m, what);
    (chol.solve(rhs), jittered)
}

/// `log |m|` for a symmetric PSD matrix, or `-inf` when it is singular.
pub fn log_det_psd(m: &DMatrix<f64>) -> f64 {
    match m.clone().cholesky() {
        Some(c) => {
            let l = c.l_dirty();
            let mut s = 0.0;
            for i in 0..m.nrows() {
                let d = l[(i, i)];
                if d <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                s += d.ln();
            }
            2.0 * s
        }
        None => f64::NEG_INFINITY,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
