//! Column-major numeric datasets, CSV ingestion, standardisation and
//! train/test splitting.
//!
//! The intercept is never stored: predictor `j` (0-based) corresponds to
//! coefficient index `j + 1`, and coefficient index 0 is the intercept.

use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

/// An `n x p` predictor matrix stored by column, plus a response vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
    response: Vec<f64>,
    names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from predictor columns and a response.
    ///
    /// Rejects empty inputs, ragged columns and non-finite entries.
    pub fn new(columns: Vec<Vec<f64>>, response: Vec<f64>) -> Result<Self> {
        let names = (1..=columns.len()).map(|j| format!("x{j}")).collect();
        Self::with_names(columns, response, names)
    }

    pub fn with_names(
        columns: Vec<Vec<f64>>,
        response: Vec<f64>,
        names: Vec<String>,
    ) -> Result<Self> {
        let n = response.len();
        if n == 0 {
            return Err(Error::invalid("dataset needs at least one row"));
        }
        if columns.is_empty() {
            return Err(Error::invalid("dataset needs at least one predictor"));
        }
        if names.len() != columns.len() {
            return Err(Error::Dimension(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::Dimension(format!(
                    "column {} has {} rows, response has {n}",
                    names[j],
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    row: i + 1,
                    column: names[j].clone(),
                });
            }
        }
        if let Some(i) = response.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i + 1,
                column: "response".into(),
            });
        }
        Ok(Self {
            columns,
            response,
            names,
        })
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    /// Predictor values of one row, without the implicit intercept.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// Copies the given rows, in the given order.
    pub fn subset_rows(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&i| c[i]).collect())
            .collect();
        let response = rows.iter().map(|&i| self.response[i]).collect();
        Dataset {
            columns,
            response,
            names: self.names.clone(),
        }
    }

    /// Keeps only the given predictor columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        Dataset {
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
            response: self.response.clone(),
            names: cols.iter().map(|&j| self.names[j].clone()).collect(),
        }
    }

    pub fn with_response(&self, response: Vec<f64>) -> Result<Dataset> {
        Dataset::with_names(self.columns.clone(), response, self.names.clone())
    }

    /// Linear predictor `b0 + x_i . b` for every row; `beta[0]` is the intercept.
    pub fn predict(&self, beta: &[f64]) -> Vec<f64> {
        assert_eq!(beta.len(), self.p() + 1, "coefficient length must be p + 1");
        let mut out = vec![beta[0]; self.n()];
        for (col, &b) in self.columns.iter().zip(&beta[1..]) {
            if b != 0.0 {
                for (o, x) in out.iter_mut().zip(col) {
                    *o += b * x;
                }
            }
        }
        out
    }
}

/// Which CSV column holds the response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponseColumn {
    Name(String),
    /// 0-based position in the file.
    Index(usize),
}

impl From<&str> for ResponseColumn {
    fn from(s: &str) -> Self {
        ResponseColumn::Name(s.to_string())
    }
}

/// Reads a comma-separated numeric file.
///
/// Every column other than the response becomes a predictor, in file order.
/// Row numbers in errors are file line numbers (1-based, header included).
pub fn load_csv(path: &Path, response: &ResponseColumn, header: bool) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, response, header)
}

pub fn read_csv<R: std::io::Read>(
    reader: R,
    response: &ResponseColumn,
    header: bool,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = rdr.records();
    let mut line_offset = 1;
    let names: Option<Vec<String>> = if header {
        line_offset = 2;
        match records.next() {
            Some(rec) => Some(rec?.iter().map(str::to_string).collect()),
            None => return Err(Error::invalid("empty file")),
        }
    } else {
        None
    };

    let mut width = names.as_ref().map(Vec::len);
    let mut cells: Vec<Vec<f64>> = Vec::new();
    let mut raw_rows = 0usize;
    let mut pending: Vec<csv::StringRecord> = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(rec.len());
        if rec.len() != expected {
            return Err(Error::RaggedRow {
                row: raw_rows + line_offset,
                found: rec.len(),
                expected,
            });
        }
        raw_rows += 1;
        pending.push(rec);
    }
    let width = width.ok_or_else(|| Error::invalid("no data rows"))?;
    let names = names.unwrap_or_else(|| (1..=width).map(|j| format!("x{j}")).collect());

    let resp_idx = match response {
        ResponseColumn::Name(name) => names
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingResponse(name.clone()))?,
        ResponseColumn::Index(i) if *i < width => *i,
        ResponseColumn::Index(i) => return Err(Error::MissingResponse(format!("#{i}"))),
    };
    if width < 2 {
        return Err(Error::invalid("need at least one predictor column"));
    }

    cells.resize(width, Vec::with_capacity(pending.len()));
    for (r, rec) in pending.iter().enumerate() {
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::NonNumeric {
                row: r + line_offset,
                column: names[j].clone(),
                value: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: r + line_offset,
                    column: names[j].clone(),
                });
            }
            cells[j].push(v);
        }
    }

    let response = cells.remove(resp_idx);
    let mut names = names;
    names.remove(resp_idx);
    Dataset::with_names(cells, response, names)
}

/// Per-column centring and scaling applied by [`standardize`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingInfo {
    pub column_means: Vec<f64>,
    /// Population standard deviations (divisor `n`); zero marks a constant column.
    pub column_sds: Vec<f64>,
    pub response_mean: f64,
}

impl ScalingInfo {
    /// Maps slopes fitted on standardised columns back to the original scale.
    ///
    /// Returns a length `p + 1` vector with the intercept recovered from means.
    pub fn to_original(&self, std_beta: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(std_beta.len() + 1);
        out.push(self.response_mean);
        for ((&b, &sd), &mean) in std_beta.iter().zip(&self.column_sds).zip(&self.column_means) {
            let slope = if sd > 0.0 { b / sd } else { 0.0 };
            out[0] -= slope * mean;
            out.push(slope);
        }
        out
    }

    pub fn is_constant(&self, j: usize) -> bool {
        self.column_sds[j] == 0.0
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return (first, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Centres and scales every column to mean 0 and population sd 1, and centres
/// the response. Constant columns become all zeros with sd recorded as 0.
pub fn standardize(d: &Dataset) -> Result<(Dataset, ScalingInfo)> {
    if d.n() < 2 {
        return Err(Error::invalid("standardisation needs at least two rows"));
    }
    let mut means = Vec::with_capacity(d.p());
    let mut sds = Vec::with_capacity(d.p());
    let columns = d
        .columns
        .iter()
        .map(|col| {
            let (mean, sd) = mean_sd(col);
            means.push(mean);
            sds.push(sd);
            if sd > 0.0 {
                col.iter().map(|v| (v - mean) / sd).collect()
            } else {
                vec![0.0; col.len()]
            }
        })
        .collect();
    let response_mean = d.response.iter().sum::<f64>() / d.n() as f64;
    let response = d.response.iter().map(|v| v - response_mean).collect();
    let info = ScalingInfo {
        column_means: means,
        column_sds: sds,
        response_mean,
    };
    Ok((
        Dataset {
            columns,
            response,
            names: d.names.clone(),
        },
        info,
    ))
}

/// Inverse of [`standardize`].
pub fn destandardize(d: &Dataset, info: &ScalingInfo) -> Dataset {
    let columns = d
        .columns
        .iter()
        .zip(info.column_means.iter().zip(&info.column_sds))
        .map(|(col, (&mean, &sd))| col.iter().map(|z| z * sd + mean).collect())
        .collect();
    let response = d.response.iter().map(|v| v + info.response_mean).collect();
    Dataset {
        columns,
        response,
        names: d.names.clone(),
    }
}

/// Disjoint train/test row sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
}

pub fn train_test_split(d: &Dataset, n_test: usize, seed: u64) -> Result<SplitSpec> {
    split_indices(d.n(), n_test, seed)
}

/// Uniformly random split of `0..n`; both index sets come back sorted.
pub fn split_indices(n: usize, n_test: usize, seed: u64) -> Result<SplitSpec> {
    if n_test == 0 || n_test >= n {
        return Err(Error::invalid(format!(
            "n_test must lie in 1..{n}, got {n_test}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::rng(seed));
    let mut test_indices = perm[..n_test].to_vec();
    let mut train_indices = perm[n_test..].to_vec();
    test_indices.sort_unstable();
    train_indices.sort_unstable();
    Ok(SplitSpec {
        train_indices,
        test_indices,
        seed,
    })
}
