use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use iboss_core::harness::{fit_method, format_summary, mean_sd, method_seed, select_rows, SweepAxis};
use iboss_core::rng::derive_seed;
use iboss_core::sim::mspe;
use iboss_core::{
    aggregate, cv_fit, load_csv, run_scenario, scaling_report, split_indices, Dataset, MethodSettings,
    ResponseColumn, RunRecord, Scenario, SubdataIndex,
};

use crate::config::{parse_config, Sweep};
use crate::output::{format_scaling, run_dir, write_csv, write_sweep, SweepOutput};
use crate::{BenchArgs, Cli, DataArgs, FitArgs, RealArgs, SelectArgs};

fn load(a: &DataArgs) -> Result<Dataset> {
    let response = match a.response.parse::<usize>() {
        Ok(i) if a.no_header || a.response.chars().all(|c| c.is_ascii_digit()) => ResponseColumn::Index(i),
        _ => ResponseColumn::Name(a.response.clone()),
    };
    let d = load_csv(&a.data, &response, !a.no_header)?;
    info!("loaded {}: n = {}, p = {}", a.data.display(), d.n(), d.p());
    Ok(d)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_sweeps(cli: &Cli, path: &Path) -> Result<Vec<Sweep>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text, cli.seed).with_context(|| format!("in {}", path.display()))
}

fn distinct(records: &[RunRecord], axis: SweepAxis) -> usize {
    records
        .iter()
        .map(|r| match axis {
            SweepAxis::N => r.n,
            SweepAxis::K => r.k,
        })
        .collect::<BTreeSet<_>>()
        .len()
}

/// Runs every scenario of a sweep and writes its result folder.
///
/// A scaling fit is added when `n` or `k` takes at least three values; with
/// `need_scaling` its absence is an error. Returns the folder and the
/// printed summary.
fn run_sweep(cli: &Cli, sweep: &Sweep, need_scaling: bool) -> Result<(std::path::PathBuf, String)> {
    let mut records = Vec::new();
    for sc in &sweep.scenarios {
        info!("{}: n = {}, p = {}, k = {}, {} reps", sc.id, sc.n, sc.p, sc.k, sc.reps);
        records.extend(run_scenario(sc)?);
    }
    if cli.deterministic_paths {
        records = records.iter().map(RunRecord::without_timings).collect();
    }
    let summary = aggregate(&records)?;
    let axis = [SweepAxis::N, SweepAxis::K]
        .into_iter()
        .find(|&a| distinct(&records, a) >= 3);
    let scaling = match axis {
        Some(axis) => scaling_report(&records, axis)?,
        None if need_scaling => bail!("[{}]: a scaling fit needs at least 3 values of n or k", sweep.name),
        None => Vec::new(),
    };
    let dir = run_dir(&cli.out_dir, &sweep.name, cli.deterministic_paths)?;
    write_sweep(
        &dir,
        &SweepOutput {
            records: &records,
            summary: &summary,
            scaling: &scaling,
        },
    )?;
    let mut text = format_summary(&summary);
    if !scaling.is_empty() {
        text.push('\n');
        text.push_str(&format_scaling(&scaling));
    }
    Ok((dir, text))
}

pub fn simulate(cli: &Cli, config: &Path) -> Result<()> {
    for sweep in read_sweeps(cli, config)? {
        let (dir, text) = run_sweep(cli, &sweep, false)?;
        println!("{text}");
        println!("results in {}", dir.display());
    }
    Ok(())
}

pub fn bench(cli: &Cli, a: &BenchArgs) -> Result<()> {
    let sweeps = match &a.config {
        Some(path) => read_sweeps(cli, path)?,
        None => {
            let mut scenarios = Vec::new();
            for &n in &a.n {
                for &k in &a.k {
                    let mut sc = Scenario::new(format!("{}-n{n}-k{k}", a.id), a.design, n, a.p, k, a.methods.0.clone());
                    sc.reps = a.reps;
                    sc.seed = cli.seed;
                    sc.n_test = a.n_test;
                    sc.cv = a.cv.params(0);
                    sc.validate()?;
                    scenarios.push(sc);
                }
            }
            vec![Sweep {
                name: a.id.clone(),
                scenarios,
            }]
        }
    };
    for sweep in &sweeps {
        let (dir, text) = run_sweep(cli, sweep, true)?;
        println!("{text}");
        println!("results in {}", dir.display());
    }
    Ok(())
}

pub fn select(cli: &Cli, a: &SelectArgs) -> Result<()> {
    if !a.method.selects_rows() {
        bail!("{} does not select rows", a.method);
    }
    let d = load(&a.data)?;
    let settings = MethodSettings {
        sketch_rows: a.sketch_rows,
        ..MethodSettings::new(a.k)
    };
    let idx = select_rows(a.method, &d, &settings, method_seed(cli.seed, a.method))?;
    idx.write_csv(sink(a.output.as_deref())?)?;
    info!("selected {} of {} rows with {}", idx.len(), d.n(), a.method);
    Ok(())
}

#[derive(Serialize)]
struct CoefRow<'a> {
    term: &'a str,
    coefficient: f64,
}

#[derive(Serialize)]
struct CvRow {
    lambda: f64,
    cv_error: f64,
    cv_se: f64,
}

pub fn fit(cli: &Cli, a: &FitArgs) -> Result<()> {
    let full = load(&a.data)?;
    let d = match &a.index {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let idx = SubdataIndex::read_csv(file)?;
            if let Some(&bad) = idx.rows.iter().find(|&&r| r >= full.n()) {
                bail!("index row {bad} is out of range for {} rows", full.n());
            }
            full.subset_rows(&idx.rows)
        }
        None => full,
    };
    let (cv, fit) = cv_fit(&d, &a.cv.params(cli.seed))?;
    let mut w = csv::Writer::from_writer(sink(a.output.as_deref())?);
    w.serialize(CoefRow {
        term: "(intercept)",
        coefficient: fit.intercept,
    })?;
    for (name, &c) in d.names().iter().zip(&fit.coefficients) {
        w.serialize(CoefRow {
            term: name,
            coefficient: c,
        })?;
    }
    w.flush()?;
    if let Some(path) = &a.path_output {
        let rows: Vec<CvRow> = (0..cv.path.len())
            .map(|t| CvRow {
                lambda: cv.path.lambdas[t],
                cv_error: cv.cv_errors[t],
                cv_se: cv.cv_se[t],
            })
            .collect();
        write_csv(path, &rows)?;
    }
    eprintln!(
        "n = {}, p = {}, lambda = {:.6e}, cv error = {:.6e}, nonzero = {}, converged = {}",
        d.n(),
        d.p(),
        fit.lambda,
        cv.cv_errors[cv.chosen_index],
        fit.nonzero_count(),
        fit.converged
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct RealRecord {
    run: usize,
    method: String,
    n_train: usize,
    n_test: usize,
    k: usize,
    mspe: f64,
    select_time_s: f64,
    fit_time_s: f64,
    total_time_s: f64,
    chosen_lambda: f64,
    nonzero: usize,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct RealSummary {
    method: String,
    runs: usize,
    failures: usize,
    mspe_mean: f64,
    mspe_sd: f64,
    select_time_mean: f64,
    fit_time_mean: f64,
    total_time_mean: f64,
}

pub fn real(cli: &Cli, a: &RealArgs) -> Result<()> {
    if a.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let d = load(&a.data)?;
    let settings = MethodSettings {
        cv: a.cv.params(0),
        ..MethodSettings::new(a.k)
    };
    let methods = &a.methods.0;
    let per_run: Vec<Vec<RealRecord>> = (0..a.runs)
        .into_par_iter()
        .map(|run| -> Result<Vec<RealRecord>> {
            let seed = derive_seed(cli.seed, run as u64);
            let split = split_indices(d.n(), a.n_test, seed)?;
            let train = d.subset_rows(&split.train_indices);
            let test = d.subset_rows(&split.test_indices);
            Ok(methods
                .iter()
                .map(|&m| {
                    let base = RealRecord {
                        run,
                        method: m.to_string(),
                        n_train: train.n(),
                        n_test: test.n(),
                        k: a.k,
                        mspe: f64::NAN,
                        select_time_s: 0.0,
                        fit_time_s: 0.0,
                        total_time_s: 0.0,
                        chosen_lambda: f64::NAN,
                        nonzero: 0,
                        error: None,
                    };
                    let scored = fit_method(m, &train, &settings, method_seed(seed, m)).and_then(|out| {
                        Ok(RealRecord {
                            mspe: mspe(&test, &out.beta)?,
                            select_time_s: out.select_time_s,
                            fit_time_s: out.fit_time_s,
                            total_time_s: out.total_time_s,
                            chosen_lambda: out.chosen_lambda,
                            nonzero: out.beta[1..].iter().filter(|b| **b != 0.0).count(),
                            ..base.clone()
                        })
                    });
                    scored.unwrap_or_else(|e| RealRecord {
                        error: Some(e.to_string()),
                        ..base
                    })
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<RealRecord> = per_run.into_iter().flatten().collect();
    if cli.deterministic_paths {
        for r in &mut records {
            r.select_time_s = 0.0;
            r.fit_time_s = 0.0;
            r.total_time_s = 0.0;
        }
    }

    let summary: Vec<RealSummary> = methods
        .iter()
        .map(|m| {
            let name = m.to_string();
            let rs: Vec<&RealRecord> = records.iter().filter(|r| r.method == name).collect();
            let ok: Vec<&RealRecord> = rs.iter().copied().filter(|r| r.error.is_none()).collect();
            let timed: Vec<&RealRecord> = if ok.len() > 1 {
                ok.iter().copied().filter(|r| r.run != 0).collect()
            } else {
                ok.clone()
            };
            let mean = |f: fn(&RealRecord) -> f64, rs: &[&RealRecord]| mean_sd(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            let (mspe_mean, mspe_sd) = mean(|r| r.mspe, &ok);
            RealSummary {
                method: name,
                runs: rs.len(),
                failures: rs.len() - ok.len(),
                mspe_mean,
                mspe_sd,
                select_time_mean: mean(|r| r.select_time_s, &timed).0,
                fit_time_mean: mean(|r| r.fit_time_s, &timed).0,
                total_time_mean: mean(|r| r.total_time_s, &timed).0,
            }
        })
        .collect();

    let id = a
        .data
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "real".into());
    let dir = run_dir(&cli.out_dir, &id, cli.deterministic_paths)?;
    write_csv(&dir.join("runs.csv"), &records)?;
    write_csv(&dir.join("summary.csv"), &summary)?;
    let mut text = format!("{:<16} {:>5} {:>14} {:>12} {:>10} {:>10}\n", "method", "runs", "mspe", "sd", "select_s", "fit_s");
    for s in &summary {
        text.push_str(&format!(
            "{:<16} {:>5} {:>14.6} {:>12.6} {:>10.4} {:>10.4}\n",
            s.method, s.runs, s.mspe_mean, s.mspe_sd, s.select_time_mean, s.fit_time_mean
        ));
    }
    fs::write(dir.join("summary.txt"), &text)?;
    println!("{text}");
    println!("results in {}", dir.display());
    Ok(())
}
