//! Replicated simulation scenarios: data generation, per-method timing and
//! scoring, aggregation and scaling fits.

mod method;
mod run;
mod summary;

pub use method::Method;
pub use run::{
    fit_method, method_seed, run_method, run_scenario, select_rows, MethodOutcome, MethodSettings, Replication, RunRecord,
    Scenario,
};
pub use summary::{
    aggregate, fit_loglog, format_summary, mean_sd, scaling_report, Phase, ScalingRow, SummaryRow, SweepAxis,
};
