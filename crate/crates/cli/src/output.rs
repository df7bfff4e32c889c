//! Result files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use iboss_core::harness::{format_summary, ScalingRow, SummaryRow};
use iboss_core::RunRecord;

/// `out_dir/<id>`, with a timestamp suffix unless `deterministic`.
pub fn run_dir(out_dir: &Path, id: &str, deterministic: bool) -> Result<PathBuf> {
    let dir = if deterministic {
        out_dir.join(id)
    } else {
        out_dir.join(format!("{id}-{}", chrono::Local::now().format("%Y%m%d-%H%M%S")))
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Files written for one sweep.
pub struct SweepOutput<'a> {
    pub records: &'a [RunRecord],
    pub summary: &'a [SummaryRow],
    pub scaling: &'a [ScalingRow],
}

/// Writes `records.csv`, `summary.csv`, `summary.txt` and, when there is a
/// scaling fit, `scaling.csv`.
pub fn write_sweep(dir: &Path, out: &SweepOutput) -> Result<()> {
    write_csv(&dir.join("records.csv"), out.records)?;
    write_csv(&dir.join("summary.csv"), out.summary)?;
    let txt = dir.join("summary.txt");
    let mut text = format_summary(out.summary);
    if !out.scaling.is_empty() {
        text.push('\n');
        text.push_str(&format_scaling(out.scaling));
        write_csv(&dir.join("scaling.csv"), out.scaling)?;
    }
    fs::write(&txt, text).with_context(|| format!("writing {}", txt.display()))?;
    Ok(())
}

pub fn format_scaling(rows: &[ScalingRow]) -> String {
    let mut out = format!("{:<16} {:<7} {:>5} {:>7} {:>9} {:>7}\n", "method", "phase", "axis", "points", "slope", "r2");
    for r in rows {
        out.push_str(&format!(
            "{:<16} {:<7} {:>5} {:>7} {:>9.4} {:>7.4}\n",
            r.method,
            format!("{:?}", r.phase).to_lowercase(),
            format!("{:?}", r.axis).to_lowercase(),
            r.points,
            r.slope,
            r.r_squared
        ));
    }
    out
}
