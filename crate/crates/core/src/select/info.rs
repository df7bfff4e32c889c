//! Information matrix of a subdata design and its D-criterion.

use nalgebra::DMatrix;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{gram_with_intercept, log_det_psd};

use super::index::SubdataIndex;

/// `(1/sigma^2) sum_i z_i z_i^T` over selected rows, `z_i = (1, x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoMatrix {
    pub m: DMatrix<f64>,
    pub sigma_sq: f64,
}

pub fn information_matrix(d: &Dataset, idx: &SubdataIndex, sigma_sq: f64) -> Result<InfoMatrix> {
    information_matrix_rows(d, &idx.rows, sigma_sq)
}

pub fn information_matrix_rows(d: &Dataset, rows: &[usize], sigma_sq: f64) -> Result<InfoMatrix> {
    if rows.is_empty() {
        return Err(Error::invalid("information matrix of an empty subset"));
    }
    if !(sigma_sq > 0.0) {
        return Err(Error::invalid("sigma_sq must be positive"));
    }
    if let Some(&bad) = rows.iter().find(|&&i| i >= d.n()) {
        return Err(Error::invalid(format!("row {bad} out of range")));
    }
    let cols: Vec<usize> = (0..d.p()).collect();
    let m = gram_with_intercept(d, Some(rows), &cols) / sigma_sq;
    Ok(InfoMatrix { m, sigma_sq })
}

/// Full-data second-moment matrix `C_n = (1/n) sum_i z_i z_i^T`.
pub fn second_moment(d: &Dataset) -> DMatrix<f64> {
    let cols: Vec<usize> = (0..d.p()).collect();
    gram_with_intercept(d, None, &cols) / d.n() as f64
}

/// `log |M|`; `-inf` for a singular matrix.
pub fn d_criterion(info: &InfoMatrix) -> f64 {
    log_det_psd(&info.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::select::{iboss_select, uniform_select};
    use crate::sim::{gen_design, DesignDist, DesignSpec};
    use nalgebra::DVector;

    #[test]
    fn rank_one_single_row() {
        let d = Dataset::new(vec![vec![2.0, 7.0]], vec![0.0, 0.0]).unwrap();
        let info = information_matrix_rows(&d, &[0], 1.0).unwrap();
        assert_eq!(info.m, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        let half = information_matrix_rows(&d, &[0], 2.0).unwrap();
        assert_eq!(half.m, info.m / 2.0);
    }

    #[test]
    fn all_rows_equals_xtx() {
        let d = Dataset::new(vec![vec![1.0, 2.0, 3.0], vec![0.5, -1.0, 4.0]], vec![0.0; 3]).unwrap();
        let x = DMatrix::from_fn(3, 3, |i, a| if a == 0 { 1.0 } else { d.value(i, a - 1) });
        let info = information_matrix_rows(&d, &[0, 1, 2], 1.0).unwrap();
        assert!((info.m.clone() - x.transpose() * &x).abs().max() < 1e-12);
        assert!((second_moment(&d) - info.m / 3.0).abs().max() < 1e-12);
    }

    #[test]
    fn d_criterion_of_diagonals() {
        let id = InfoMatrix { m: DMatrix::identity(2, 2), sigma_sq: 1.0 };
        assert_eq!(d_criterion(&id), 0.0);
        let two = InfoMatrix {
            m: DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0])),
            sigma_sq: 1.0,
        };
        assert!((d_criterion(&two) - 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = Dataset::new(vec![vec![1.0]], vec![0.0]).unwrap();
        assert!(information_matrix_rows(&d, &[], 1.0).is_err());
        assert!(information_matrix_rows(&d, &[0], 0.0).is_err());
    }

    #[test]
    fn iboss_beats_uniform_on_normal_designs() {
        let mut wins = 0;
        for t in 0..100 {
            let cols = gen_design(&DesignSpec { dist: DesignDist::Normal, n: 500, p: 3, seed: t });
            let d = Dataset::new(cols, vec![0.0; 500]).unwrap();
            let ib = information_matrix(&d, &iboss_select(&d, 24).unwrap(), 1.0).unwrap();
            let un = information_matrix(&d, &uniform_select(500, 24, 1000 + t).unwrap(), 1.0).unwrap();
            if d_criterion(&ib) >= d_criterion(&un) {
                wins += 1;
            }
        }
        assert!(wins >= 95, "IBOSS won only {wins} of 100");
    }
}
