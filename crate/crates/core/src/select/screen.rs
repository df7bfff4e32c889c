//! Sure independence screening by marginal correlation.

use std::cmp::Ordering;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

use super::iboss::iboss_on_columns;
use super::index::SubdataIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenResult {
    /// 0-based predictor columns, by descending `|corr|`, ties by ascending index.
    pub selected_vars: Vec<usize>,
    /// Pearson correlation of every column with the response.
    pub correlations: Vec<f64>,
}

/// Pearson correlation of each raw column with the raw response.
/// Constant columns get correlation 0.
pub fn correlations(d: &Dataset) -> Result<Vec<f64>> {
    if d.n() < 2 {
        return Err(Error::invalid("screening needs at least two rows"));
    }
    let y = d.response();
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::ConstantResponse);
    }
    let n = d.n() as f64;
    let y_mean = y.iter().sum::<f64>() / n;
    let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    let syy: f64 = yc.iter().map(|v| v * v).sum();

    Ok(d
        .columns()
        .iter()
        .map(|col| {
            if col.iter().all(|&v| v == col[0]) {
                return 0.0;
            }
            let mean = col.iter().sum::<f64>() / n;
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (x, yv) in col.iter().zip(&yc) {
                let dx = x - mean;
                sxy += dx * yv;
                sxx += dx * dx;
            }
            (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
        })
        .collect())
}

/// Keeps the `s` columns most correlated (in absolute value) with the response.
pub fn sis_screen(d: &Dataset, s: usize) -> Result<ScreenResult> {
    if s == 0 || s > d.p() {
        return Err(Error::invalid(format!("screen size must lie in 1..={}, got {s}", d.p())));
    }
    let correlations = correlations(d)?;
    let mut order: Vec<usize> = (0..d.p()).collect();
    order.sort_unstable_by(|&a, &b| {
        correlations[b]
            .abs()
            .partial_cmp(&correlations[a].abs())
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(s);
    Ok(ScreenResult {
        selected_vars: order,
        correlations,
    })
}

/// Screens to `s` columns, then runs extreme-point selection over them in
/// screened order (strongest correlation first).
pub fn sis_iboss_select(d: &Dataset, k: usize, s: usize) -> Result<(SubdataIndex, ScreenResult)> {
    let screen = sis_screen(d, s)?;
    let idx = iboss_on_columns(d, &screen.selected_vars, k, &format!("SIS-IBOSS({s})"))?;
    Ok((idx, screen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::select::{iboss_select, partial_extremes};
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut r = rng::rng(seed);
        (0..n).map(|_| StandardNormal.sample(&mut r)).collect()
    }

    #[test]
    fn perfect_correlation_ranks_first() {
        let x1 = noise(200, 1);
        let y: Vec<f64> = x1.iter().map(|v| 3.0 * v).collect();
        let d = Dataset::new(vec![noise(200, 2), x1, noise(200, 3)], y).unwrap();
        let s = sis_screen(&d, 3).unwrap();
        assert_eq!(s.selected_vars[0], 1);
        assert!((s.correlations[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_gets_zero_and_ranks_last() {
        let d = Dataset::new(vec![vec![2.0; 50], noise(50, 4)], noise(50, 5)).unwrap();
        let s = sis_screen(&d, 2).unwrap();
        assert_eq!(s.correlations[0], 0.0);
        assert_eq!(s.selected_vars, vec![1, 0]);
    }

    #[test]
    fn constant_response_is_an_error() {
        let d = Dataset::new(vec![noise(10, 6)], vec![1.0; 10]).unwrap();
        assert!(matches!(sis_screen(&d, 1), Err(Error::ConstantResponse)));
    }

    #[test]
    fn screen_size_must_be_valid() {
        let d = Dataset::new(vec![noise(10, 6)], noise(10, 7)).unwrap();
        assert!(sis_screen(&d, 0).is_err());
        assert!(sis_screen(&d, 2).is_err());
    }

    #[test]
    fn full_screen_in_natural_order_matches_iboss() {
        // Correlations decreasing with column index by construction.
        let cols: Vec<Vec<f64>> = (0..3).map(|j| noise(100, 10 + j)).collect();
        let y: Vec<f64> = (0..100)
            .map(|i| 3.0 * cols[0][i] + 2.0 * cols[1][i] + 1.0 * cols[2][i])
            .collect();
        let d = Dataset::new(cols, y).unwrap();
        let (idx, screen) = sis_iboss_select(&d, 12, 3).unwrap();
        assert_eq!(screen.selected_vars, vec![0, 1, 2]);
        assert_eq!(idx.rows, iboss_select(&d, 12).unwrap().rows);
    }

    #[test]
    fn single_signal_column_takes_its_extremes() {
        let x1 = noise(100, 20);
        let y: Vec<f64> = x1.iter().zip(noise(100, 21)).map(|(a, e)| 2.0 * a + 0.1 * e).collect();
        let d = Dataset::new(vec![noise(100, 22), x1.clone(), noise(100, 23)], y).unwrap();
        let (idx, screen) = sis_iboss_select(&d, 4, 1).unwrap();
        assert_eq!(screen.selected_vars, vec![1]);
        let ext = partial_extremes(&x1, 2, &[false; 100]).unwrap();
        let mut want = ext.low.clone();
        want.extend(&ext.high);
        assert_eq!(idx.rows, want);
        assert!(idx.provenance.unwrap().iter().all(|t| t.column == 1));
    }

    #[test]
    fn wide_screen_keeps_requested_count() {
        let n = 40;
        let cols: Vec<Vec<f64>> = (0..5000).map(|j| noise(n, 100 + j)).collect();
        let d = Dataset::new(cols, noise(n, 99)).unwrap();
        let s = sis_screen(&d, 250).unwrap();
        assert_eq!(s.selected_vars.len(), 250);
        let mut sorted = s.selected_vars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 250);
    }
}
