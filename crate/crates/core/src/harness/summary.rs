use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

use super::run::RunRecord;

/// Mean and sample standard deviation of every metric for one
/// (scenario, method) pair.
///
/// Timings skip replication 0 (warm-up) unless it is the only one. Failed
/// records are counted but excluded from all statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub method: String,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub reps: usize,
    pub failures: usize,
    pub mse_mean: f64,
    pub mse_sd: f64,
    pub log10_mse: f64,
    pub mspe_mean: f64,
    pub mspe_sd: f64,
    pub sensitivity_mean: f64,
    pub sensitivity_sd: f64,
    pub specificity_mean: f64,
    pub specificity_sd: f64,
    pub lambda_mean: f64,
    pub lambda_sd: f64,
    pub iterations_mean: f64,
    pub iterations_sd: f64,
    pub select_time_mean: f64,
    pub select_time_sd: f64,
    pub fit_time_mean: f64,
    pub fit_time_sd: f64,
    pub total_time_mean: f64,
    pub total_time_sd: f64,
}

/// Mean and sample standard deviation (0 for a single value, NaN for none).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    match values.len() {
        0 => (f64::NAN, f64::NAN),
        1 => (values[0], 0.0),
        len => {
            let m = values.iter().sum::<f64>() / len as f64;
            let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (len - 1) as f64;
            (m, var.sqrt())
        }
    }
}

/// Per (scenario, method) summaries in first-appearance order.
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::invalid("no records to aggregate"));
    }
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.scenario.clone(), r.method.clone());
        let g = groups.entry(key.clone()).or_default();
        if g.is_empty() {
            order.push(key);
        }
        g.push(r);
    }
    Ok(order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let ok: Vec<&RunRecord> = group.iter().copied().filter(|r| r.is_ok()).collect();
            let warm: Vec<&RunRecord> = if ok.iter().any(|r| r.replication != 0) {
                ok.iter().copied().filter(|r| r.replication != 0).collect()
            } else {
                ok.clone()
            };
            let stat = |rs: &[&RunRecord], f: fn(&RunRecord) -> f64| {
                mean_sd(&rs.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            let (mse_mean, mse_sd) = stat(&ok, |r| r.mse);
            let (mspe_mean, mspe_sd) = stat(&ok, |r| r.mspe);
            let (sensitivity_mean, sensitivity_sd) = stat(&ok, |r| r.sensitivity);
            let (specificity_mean, specificity_sd) = stat(&ok, |r| r.specificity);
            let (lambda_mean, lambda_sd) = stat(&ok, |r| r.chosen_lambda);
            let (iterations_mean, iterations_sd) = stat(&ok, |r| r.iterations as f64);
            let (select_time_mean, select_time_sd) = stat(&warm, |r| r.select_time_s);
            let (fit_time_mean, fit_time_sd) = stat(&warm, |r| r.fit_time_s);
            let (total_time_mean, total_time_sd) = stat(&warm, |r| r.total_time_s);
            let first = group[0];
            SummaryRow {
                scenario: key.0,
                method: key.1,
                n: first.n,
                p: first.p,
                k: first.k,
                reps: group.len(),
                failures: group.len() - ok.len(),
                mse_mean,
                mse_sd,
                log10_mse: mse_mean.log10(),
                mspe_mean,
                mspe_sd,
                sensitivity_mean,
                sensitivity_sd,
                specificity_mean,
                specificity_sd,
                lambda_mean,
                lambda_sd,
                iterations_mean,
                iterations_sd,
                select_time_mean,
                select_time_sd,
                fit_time_mean,
                fit_time_sd,
                total_time_mean,
                total_time_sd,
            }
        })
        .collect())
}

/// Fixed-width text rendering of a summary.
pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<16} {:<16} {:>8} {:>6} {:>6} {:>5} {:>11} {:>9} {:>11} {:>7} {:>7} {:>10} {:>10}\n",
        "scenario", "method", "n", "p", "k", "reps", "mse", "log10mse", "mspe", "sens", "spec", "select_s", "fit_s"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<16} {:<16} {:>8} {:>6} {:>6} {:>5} {:>11.4e} {:>9.4} {:>11.4e} {:>7.4} {:>7.4} {:>10.4} {:>10.4}\n",
            r.scenario,
            r.method,
            r.n,
            r.p,
            r.k,
            r.reps,
            r.mse_mean,
            r.log10_mse,
            r.mspe_mean,
            r.sensitivity_mean,
            r.specificity_mean,
            r.select_time_mean,
            r.fit_time_mean,
        ));
    }
    out
}

/// Timing phase of a run record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Select,
    Fit,
    Total,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Select, Phase::Fit, Phase::Total];

    fn time(self, r: &RunRecord) -> f64 {
        match self {
            Phase::Select => r.select_time_s,
            Phase::Fit => r.fit_time_s,
            Phase::Total => r.total_time_s,
        }
    }
}

/// Variable swept across the records passed to [`scaling_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    K,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub method: String,
    pub phase: Phase,
    pub axis: SweepAxis,
    pub points: usize,
    /// Exponent of the fitted power law `time ~ x^slope`.
    pub slope: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln x, ln y)`: returns slope and R^2.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension("x and y lengths differ".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 || lx.len() < 2 {
        return Err(Error::invalid("degenerate sweep: all x values are equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok((slope, r_squared))
}

/// Power-law exponents of time against `n` (or `k`) per method and phase.
///
/// Each sweep point contributes the mean time of its non-warm-up records.
/// Phases with a zero mean time at some point (such as the selection phase
/// of FULL) are skipped.
pub fn scaling_report(records: &[RunRecord], axis: SweepAxis) -> Result<Vec<ScalingRow>> {
    let mut methods: Vec<String> = Vec::new();
    for r in records {
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    let mut out = Vec::new();
    for method in methods {
        let rs: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.method == method && r.is_ok())
            .collect();
        let mut by_x: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
        for r in &rs {
            by_x.entry(match axis {
                SweepAxis::N => r.n,
                SweepAxis::K => r.k,
            })
            .or_default()
            .push(r);
        }
        if by_x.len() < 3 {
            return Err(Error::invalid(format!(
                "{method}: scaling needs at least 3 distinct sweep points, got {}",
                by_x.len()
            )));
        }
        for phase in Phase::ALL {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (&x, group) in &by_x {
                let timed: Vec<f64> = group
                    .iter()
                    .filter(|r| r.replication != 0 || group.len() == 1)
                    .map(|r| phase.time(r))
                    .collect();
                xs.push(x as f64);
                ys.push(mean_sd(&timed).0);
            }
            if ys.iter().any(|&y| !(y > 0.0)) {
                continue;
            }
            let (slope, r_squared) = fit_loglog(&xs, &ys)?;
            out.push(ScalingRow {
                method: method.clone(),
                phase,
                axis,
                points: xs.len(),
                slope,
                r_squared,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(method: &str, rep: usize, n: usize, mse: f64, fit: f64) -> RunRecord {
        RunRecord {
            scenario: "s".into(),
            method: method.into(),
            replication: rep,
            n,
            p: 5,
            k: 10,
            select_time_s: 0.0,
            fit_time_s: fit,
            total_time_s: fit,
            mse,
            mspe: mse + 1.0,
            sensitivity: 1.0,
            specificity: 0.5,
            chosen_lambda: 0.1,
            iterations: 3,
            error: None,
        }
    }

    #[test]
    fn single_record() {
        let rows = aggregate(&[rec("UNIF", 0, 100, 2.5, 1.0)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].mse_mean, rows[0].mse_sd), (2.5, 0.0));
        assert_eq!(rows[0].fit_time_mean, 1.0);
    }

    #[test]
    fn two_records() {
        let rows = aggregate(&[rec("UNIF", 0, 100, 1.0, 9.0), rec("UNIF", 1, 100, 3.0, 2.0)]).unwrap();
        assert_eq!(rows[0].mse_mean, 2.0);
        assert!((rows[0].mse_sd - 2f64.sqrt()).abs() < 1e-15);
        assert!((rows[0].log10_mse - 2f64.log10()).abs() < 1e-15);
        // Warm-up replication excluded from timings.
        assert_eq!(rows[0].fit_time_mean, 2.0);
    }

    #[test]
    fn failures_are_counted_not_averaged() {
        let mut bad = rec("LEV", 1, 100, f64::NAN, 0.0);
        bad.error = Some("boom".into());
        let rows = aggregate(&[rec("LEV", 0, 100, 1.0, 1.0), bad]).unwrap();
        assert_eq!((rows[0].reps, rows[0].failures), (2, 1));
        assert_eq!(rows[0].mse_mean, 1.0);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn groups_keep_first_appearance_order() {
        let rows = aggregate(&[rec("UNIF", 0, 1, 1.0, 1.0), rec("FULL", 0, 1, 1.0, 1.0), rec("UNIF", 1, 1, 1.0, 1.0)]).unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.method.as_str()).collect();
        assert_eq!(names, vec!["UNIF", "FULL"]);
        assert!(format_summary(&rows).lines().count() == 3);
    }

    #[test]
    fn exact_power_law() {
        let recs: Vec<RunRecord> = [10_000usize, 20_000, 40_000, 80_000]
            .iter()
            .flat_map(|&n| (0..3).map(move |rep| rec("D-OPT", rep, n, 1.0, 3e-6 * n as f64)))
            .collect();
        let report = scaling_report(&recs, SweepAxis::N).unwrap();
        // Select phase is all zeros and skipped.
        assert_eq!(report.len(), 2);
        for row in report {
            assert!((row.slope - 1.0).abs() < 1e-6);
            assert!((row.r_squared - 1.0).abs() < 1e-9);
            assert_eq!(row.points, 4);
        }
    }

    #[test]
    fn quadratic_law_and_degenerate_sweep() {
        let (slope, _) = fit_loglog(&[1.0, 2.0, 4.0], &[3.0, 12.0, 48.0]).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert!(fit_loglog(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
        let same_n: Vec<RunRecord> = (0..5).map(|rep| rec("UNIF", rep, 100, 1.0, 1.0)).collect();
        assert!(scaling_report(&same_n, SweepAxis::N).is_err());
    }
}
