use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Which end of a column's range a row was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Min,
    Max,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Min => "min",
            Side::Max => "max",
        })
    }
}

/// Why a row was selected by an extreme-point selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowTag {
    /// 0-based predictor column.
    pub column: usize,
    pub side: Side,
}

/// The selected rows of a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdataIndex {
    /// Distinct 0-based row indices.
    pub rows: Vec<usize>,
    pub k: usize,
    pub selector: String,
    /// One tag per entry of `rows`, for extreme-point selectors.
    pub provenance: Option<Vec<RowTag>>,
    /// Columns on which every candidate value tied, so extremes were picked by index.
    pub degenerate_columns: Vec<usize>,
}

impl SubdataIndex {
    pub fn sampled(rows: Vec<usize>, selector: impl Into<String>) -> Self {
        Self {
            k: rows.len(),
            rows,
            selector: selector.into(),
            provenance: None,
            degenerate_columns: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Writes `row[,selector,column,side]` CSV with 0-based indices.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        match &self.provenance {
            Some(tags) => {
                wtr.write_record(["row", "selector", "column", "side"])?;
                for (row, tag) in self.rows.iter().zip(tags) {
                    wtr.write_record([
                        row.to_string(),
                        self.selector.clone(),
                        tag.column.to_string(),
                        tag.side.to_string(),
                    ])?;
                }
            }
            None => {
                wtr.write_record(["row"])?;
                for row in &self.rows {
                    wtr.write_record([row.to_string()])?;
                }
            }
        }
        wtr.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    /// Reads the format produced by [`SubdataIndex::write_csv`]; only the
    /// `row` column is required.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let row_col = col("row").ok_or_else(|| Error::invalid("index file lacks a `row` column"))?;
        let (sel_col, c_col, side_col) = (col("selector"), col("column"), col("side"));

        let mut rows = Vec::new();
        let mut tags = Vec::new();
        let mut selector = String::from("file");
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |idx: usize| -> Result<usize> {
                rec[idx].parse().map_err(|_| Error::NonNumeric {
                    row: line + 2,
                    column: headers[idx].to_string(),
                    value: rec[idx].to_string(),
                })
            };
            rows.push(parse(row_col)?);
            if let Some(s) = sel_col {
                selector = rec[s].to_string();
            }
            if let (Some(c), Some(s)) = (c_col, side_col) {
                let side = match &rec[s] {
                    "min" => Side::Min,
                    "max" => Side::Max,
                    other => return Err(Error::invalid(format!("bad side {other:?}"))),
                };
                tags.push(RowTag {
                    column: parse(c)?,
                    side,
                });
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(rows.len());
        if let Some(dup) = rows.iter().find(|r| !seen.insert(**r)) {
            return Err(Error::invalid(format!("row {dup} listed twice")));
        }
        Ok(Self {
            k: rows.len(),
            provenance: (!tags.is_empty()).then_some(tags),
            rows,
            selector,
            degenerate_columns: Vec::new(),
        })
    }
}
