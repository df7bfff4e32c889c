//! Coordinate-descent LASSO, penalty paths, cross-validation and plain
//! least squares.

mod cd;
mod cv;
mod ols;
mod path;

pub use cd::{
    kkt_violation, lasso_fit, soft_threshold, CdProblem, CdSolution, LassoFit, SolverOptions, Strategy,
};
pub use cv::{cv_fit, cv_select, fold_assignment, CvParams, CvResult};
pub use ols::ols_fit;
pub use path::{build_path, fit_path, lambda_max, LambdaPath, PathParams};
