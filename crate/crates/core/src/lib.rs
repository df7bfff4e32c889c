//! Information-based subdata selection for LASSO regression on large data.
//!
//! The crate provides:
//!
//! * [`select`]: IBOSS, SIS screening, SIS-IBOSS, uniform and leverage-score
//!   row selection, and the information-matrix D-criterion;
//! * [`lasso`]: a coordinate-descent LASSO with warm-started penalty paths
//!   and K-fold cross-validation;
//! * [`spc`]: the split-and-conquer baseline;
//! * [`sim`]: synthetic designs, true models and evaluation metrics;
//! * [`harness`]: replicated simulation scenarios with per-phase timings.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod lasso;
pub mod linalg;
pub mod rng;
pub mod select;
pub mod sim;
pub mod spc;

pub use dataset::{
    destandardize, load_csv, read_csv, split_indices, standardize, train_test_split, Dataset, ResponseColumn,
    ScalingInfo, SplitSpec,
};
pub use error::{Error, Result};
pub use harness::{
    aggregate, fit_method, run_scenario, scaling_report, Method, MethodOutcome, MethodSettings, RunRecord, Scenario,
    SummaryRow,
};
pub use lasso::{cv_fit, cv_select, lasso_fit, ols_fit, CvParams, CvResult, LambdaPath, LassoFit, SolverOptions};
pub use select::{
    d_criterion, iboss_select, information_matrix, sis_iboss_select, sis_screen, uniform_select, InfoMatrix,
    ScreenResult, SubdataIndex,
};
pub use sim::{DesignDist, DesignSpec, TrueModel};
pub use spc::{spc_fit, SpcConfig, SpcFit, SupportSet};
