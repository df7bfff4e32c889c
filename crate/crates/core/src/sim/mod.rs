//! Synthetic designs, true models and evaluation metrics.

mod asymptotic;
mod design;
mod metrics;
mod model;

pub use asymptotic::{asymptotic_variance_check, median, LambdaRule, VarianceReport};
pub use design::{gen_design, DesignDist, DesignSpec};
pub use metrics::{mse, mspe, selection_metrics, SelectionMetrics};
pub use model::{beta_star, gen_response, gen_true_model, p_star, Placement, TrueModel};
