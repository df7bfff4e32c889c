//! Partial selection of the smallest and largest values of a column.
//!
//! Uses introselect (`select_nth_unstable_by`), so each call costs expected
//! `O(n + r log r)` rather than a full sort.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    /// Ascending by value.
    pub low: Vec<usize>,
    /// Descending by value.
    pub high: Vec<usize>,
}

/// The `r` smallest and `r` largest values among rows not marked `excluded`.
///
/// Ties go to the smallest row index on both sides, and `low` and `high`
/// never share a row.
pub fn partial_extremes(values: &[f64], r: usize, excluded: &[bool]) -> Result<Extremes> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    if excluded.len() != values.len() {
        return Err(Error::Dimension(format!(
            "{} exclusion flags for {} values",
            excluded.len(),
            values.len()
        )));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("values contain NaN"));
    }
    let in_pool: Vec<bool> = excluded.iter().map(|e| !e).collect();
    let mut scratch = Vec::new();
    select_extremes(values, r, r, &in_pool, &mut scratch)
}

fn ascending(values: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    }
}

fn descending(values: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    }
}

/// Core of [`partial_extremes`] with separate low/high counts and a reusable
/// scratch buffer. `values` must be NaN-free.
pub(crate) fn select_extremes(
    values: &[f64],
    n_low: usize,
    n_high: usize,
    in_pool: &[bool],
    scratch: &mut Vec<usize>,
) -> Result<Extremes> {
    scratch.clear();
    scratch.extend((0..values.len()).filter(|&i| in_pool[i]));
    if scratch.len() < n_low + n_high {
        return Err(Error::InsufficientRows {
            available: scratch.len(),
            needed: n_low + n_high,
        });
    }

    let asc = ascending(values);
    if n_low > 0 && n_low < scratch.len() {
        scratch.select_nth_unstable_by(n_low - 1, &asc);
    }
    let mut low = scratch[..n_low].to_vec();
    low.sort_unstable_by(&asc);

    let rest = &mut scratch[n_low..];
    let desc = descending(values);
    if n_high > 0 && n_high < rest.len() {
        rest.select_nth_unstable_by(n_high - 1, &desc);
    }
    let mut high = rest[..n_high].to_vec();
    high.sort_unstable_by(&desc);

    Ok(Extremes { low, high })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn none(n: usize) -> Vec<bool> {
        vec![false; n]
    }

    /// Full stable sort with exclusion, then take both ends.
    fn oracle(values: &[f64], r: usize, excluded: &[bool]) -> Extremes {
        let mut idx: Vec<usize> = (0..values.len()).filter(|&i| !excluded[i]).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let low: Vec<usize> = idx[..r].to_vec();
        let mut rest: Vec<usize> = idx[r..].to_vec();
        rest.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        Extremes {
            low,
            high: rest[..r].to_vec(),
        }
    }

    #[test]
    fn picks_min_and_max() {
        let v = [5.0, 1.0, 9.0, 3.0, 7.0];
        let e = partial_extremes(&v, 1, &none(5)).unwrap();
        assert_eq!((e.low, e.high), (vec![1], vec![2]));
    }

    #[test]
    fn respects_exclusion() {
        let v = [5.0, 1.0, 9.0, 3.0, 7.0];
        let mut ex = none(5);
        ex[2] = true;
        let e = partial_extremes(&v, 1, &ex).unwrap();
        assert_eq!((e.low, e.high), (vec![1], vec![4]));
    }

    #[test]
    fn ties_break_by_index_and_stay_disjoint() {
        let v = [2.0; 4];
        let e = partial_extremes(&v, 1, &none(4)).unwrap();
        assert_eq!(e, oracle(&v, 1, &none(4)));
        assert_eq!((e.low, e.high), (vec![0], vec![1]));
    }

    #[test]
    fn errors_when_pool_too_small() {
        let v = [1.0, 2.0, 3.0];
        assert!(matches!(
            partial_extremes(&v, 2, &none(3)),
            Err(Error::InsufficientRows { available: 3, needed: 4 })
        ));
        assert!(partial_extremes(&v, 0, &none(3)).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_full_sort(
            raw in prop::collection::vec(-5i32..5, 4..60),
            r in 1usize..4,
            mask in prop::collection::vec(prop::bool::weighted(0.2), 60),
        ) {
            let values: Vec<f64> = raw.iter().map(|&v| v as f64).collect();
            let excluded = &mask[..values.len()];
            let avail = excluded.iter().filter(|e| !**e).count();
            prop_assume!(avail >= 2 * r);
            let got = partial_extremes(&values, r, excluded).unwrap();
            prop_assert_eq!(got, oracle(&values, r, excluded));
        }
    }
}
