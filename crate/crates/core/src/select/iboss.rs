//! D-optimal information-based subdata selection.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

use super::extremes::select_extremes;
use super::index::{RowTag, Side, SubdataIndex};

/// Selects `k` rows by taking, column by column in order `0..p`, the
/// `r = k / (2p)` smallest and largest values still in the pool and removing
/// them from it.
///
/// When `2p` does not divide `k`, the leftover `k - 2pr` rows are handed out
/// one at a time in the order column 0 min, column 0 max, column 1 min, ...
pub fn iboss_select(d: &Dataset, k: usize) -> Result<SubdataIndex> {
    let cols: Vec<usize> = (0..d.p()).collect();
    iboss_on_columns(d, &cols, k, "D-OPT")
}

/// Per-slot quota: slot `2t` is the min side of the `t`-th column, `2t + 1` its max side.
fn quota(k: usize, n_cols: usize, slot: usize) -> usize {
    let r = k / (2 * n_cols);
    let extra = k - 2 * n_cols * r;
    r + usize::from(slot < extra)
}

/// Extreme-point selection over `cols`, processed in the order given.
pub(crate) fn iboss_on_columns(
    d: &Dataset,
    cols: &[usize],
    k: usize,
    selector: &str,
) -> Result<SubdataIndex> {
    if cols.is_empty() {
        return Err(Error::invalid("no columns to select on"));
    }
    if k < 2 {
        return Err(Error::invalid(format!("subdata size must be at least 2, got {k}")));
    }
    if k > d.n() {
        return Err(Error::InsufficientRows {
            available: d.n(),
            needed: k,
        });
    }

    let mut in_pool = vec![true; d.n()];
    let mut scratch = Vec::with_capacity(d.n());
    let mut rows = Vec::with_capacity(k);
    let mut tags = Vec::with_capacity(k);
    let mut degenerate = Vec::new();

    for (t, &j) in cols.iter().enumerate() {
        let (lo, hi) = (quota(k, cols.len(), 2 * t), quota(k, cols.len(), 2 * t + 1));
        if lo + hi == 0 {
            // Quotas are non-increasing in slot order, so every later column is empty too.
            break;
        }
        let values = d.column(j);
        let ext = select_extremes(values, lo, hi, &in_pool, &mut scratch)?;
        if values.iter().all(|&v| v == values[0]) {
            degenerate.push(j);
        }
        for (side, picked) in [(Side::Min, &ext.low), (Side::Max, &ext.high)] {
            for &i in picked {
                in_pool[i] = false;
                rows.push(i);
                tags.push(RowTag { column: j, side });
            }
        }
    }
    debug_assert_eq!(rows.len(), k);

    Ok(SubdataIndex {
        rows,
        k,
        selector: selector.to_string(),
        provenance: Some(tags),
        degenerate_columns: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ds(cols: Vec<Vec<f64>>) -> Dataset {
        let n = cols[0].len();
        Dataset::new(cols, vec![0.0; n]).unwrap()
    }

    #[test]
    fn k_equal_n_takes_everything() {
        let d = ds(vec![vec![3.0, 1.0, 4.0, 1.5]]);
        let idx = iboss_select(&d, 4).unwrap();
        let got: HashSet<_> = idx.rows.iter().copied().collect();
        assert_eq!(got, (0..4).collect());
    }

    #[test]
    fn hand_executed_two_column_case() {
        // rows (0,5) (10,6) (2,7) (3,-1) (4,2)
        let d = ds(vec![vec![0.0, 10.0, 2.0, 3.0, 4.0], vec![5.0, 6.0, 7.0, -1.0, 2.0]]);
        let idx = iboss_select(&d, 4).unwrap();
        assert_eq!(idx.rows, vec![0, 1, 3, 2]);
        let tags = idx.provenance.unwrap();
        assert_eq!(tags[0], RowTag { column: 0, side: Side::Min });
        assert_eq!(tags[1], RowTag { column: 0, side: Side::Max });
        assert_eq!(tags[2], RowTag { column: 1, side: Side::Min });
        assert_eq!(tags[3], RowTag { column: 1, side: Side::Max });
    }

    #[test]
    fn remainder_goes_round_robin() {
        // k = 7, p = 2: r = 1, three extras to col0 min, col0 max, col1 min.
        assert_eq!((0..4).map(|s| quota(7, 2, s)).collect::<Vec<_>>(), vec![2, 2, 2, 1]);
        // k < 2p: only the leading slots get a point.
        assert_eq!((0..6).map(|s| quota(2, 3, s)).collect::<Vec<_>>(), vec![1, 1, 0, 0, 0, 0]);
        let d = ds(vec![(0..20).map(f64::from).collect(), (0..20).map(|i| f64::from(i * 7 % 20)).collect()]);
        let idx = iboss_select(&d, 7).unwrap();
        assert_eq!(idx.len(), 7);
        assert_eq!(idx.rows.iter().collect::<HashSet<_>>().len(), 7);
    }

    #[test]
    fn constant_column_is_flagged_not_rejected() {
        let d = ds(vec![vec![1.0; 6]]);
        let idx = iboss_select(&d, 4).unwrap();
        assert_eq!(idx.rows, vec![0, 1, 2, 3]);
        assert_eq!(idx.degenerate_columns, vec![0]);
    }

    #[test]
    fn rejects_bad_k() {
        let d = ds(vec![vec![1.0, 2.0, 3.0]]);
        assert!(iboss_select(&d, 4).is_err());
        assert!(iboss_select(&d, 1).is_err());
    }
}
