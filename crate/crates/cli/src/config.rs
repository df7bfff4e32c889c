//! Scenario files.
//!
//! A plain-text file of `key = value` lines grouped into `[name]` sections,
//! one section per scenario. Keys given before the first section are
//! defaults for every section. `#` and `;` start comments.
//!
//! ```text
//! reps = 100
//!
//! [fig1]
//! design = t2
//! n = 10000, 20000, 40000, 80000
//! p = 50
//! k = 1000
//! methods = FULL, D-OPT, LEV, UNIF
//! ```
//!
//! `n` and `k` accept comma-separated lists; a section then expands into one
//! scenario per combination, all sharing the section's seed.

use std::collections::BTreeMap;
use std::str::FromStr;

use iboss_core::harness::Method;
use iboss_core::lasso::{CvParams, PathParams};
use iboss_core::sim::{DesignDist, Placement};
use iboss_core::Scenario;
use thiserror::Error;

/// Shown by `iboss simulate --help`.
pub const KEYS_HELP: &str = "\
Scenario file keys (one [section] per scenario; keys before the first section are defaults):
  design       normal | lognormal | t2 | mixture            (required)
  n            full-data size; a comma-separated list sweeps it  (required)
  p            number of predictors                           (required)
  k            subdata size; a list sweeps it                 (required)
  methods      FULL, UNIF, LEV, LEV(s), ALEV(s), D-OPT, SIS-IBOSS(s), SPC(w/K)  (required)
  reps         replications                                   (default 100)
  seed         base seed                                      (default: --seed)
  n_test       test-set size                                  (default 1000)
  placement    random | first: where the nonzero slopes sit   (default random)
  sigma        noise standard deviation                       (default 1)
  folds        cross-validation folds                         (default 10)
  path_length  number of penalties on the path                (default 100)
  epsilon      smallest penalty as a fraction of the largest  (default 0.001)
  sketch_rows  sketch size for ALEV(s)                        (default 20(s+1))";

const KEYS: [&str; 14] = [
    "design",
    "n",
    "p",
    "k",
    "methods",
    "reps",
    "seed",
    "n_test",
    "placement",
    "sigma",
    "folds",
    "path_length",
    "epsilon",
    "sketch_rows",
];

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError { line, msg: msg.into() }
}

/// The scenarios of one section, in `n`-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub scenarios: Vec<Scenario>,
}

/// Splits on commas and whitespace outside parentheses.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' | ' ' | '\t' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Comma-separated method descriptors, e.g. `FULL, SPC(5,10), LEV(250)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodList(pub Vec<Method>);

impl FromStr for MethodList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let methods = split_list(s)
            .iter()
            .map(|m| m.parse::<Method>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        if methods.is_empty() {
            return Err("no methods given".into());
        }
        Ok(MethodList(methods))
    }
}

/// Key to (value, line).
type Section = BTreeMap<String, (String, usize)>;
/// Name, header line, entries.
type Named = (String, usize, Section);

fn parse_sections(text: &str) -> Result<(Section, Vec<Named>), ConfigError> {
    let mut defaults = Section::new();
    let mut sections: Vec<Named> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim();
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(err(line, format!("bad section name {name:?}")));
            }
            if sections.iter().any(|(n, _, _)| n == name) {
                return Err(err(line, format!("section [{name}] appears twice")));
            }
            sections.push((name.to_string(), line, Section::new()));
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got {body:?}")))?;
        let key = key.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(err(line, format!("unknown key {key:?}")));
        }
        let target = match sections.last_mut() {
            Some((_, _, s)) => s,
            None => &mut defaults,
        };
        if target.insert(key.clone(), (value.trim().to_string(), line)).is_some() {
            return Err(err(line, format!("key {key:?} set twice")));
        }
    }
    Ok((defaults, sections))
}

fn value<T: FromStr>(entries: &Section, key: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    entries
        .get(key)
        .map(|(v, line)| {
            v.parse::<T>()
                .map_err(|e| err(*line, format!("bad value {v:?} for {key}: {e}")))
        })
        .transpose()
}

fn list(entries: &Section, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
    let Some((v, line)) = entries.get(key) else {
        return Ok(None);
    };
    let items = split_list(v)
        .iter()
        .map(|s| s.parse::<usize>().map_err(|_| err(*line, format!("bad count {s:?} in {key}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(err(*line, format!("{key} is empty")));
    }
    Ok(Some(items))
}

fn build_sweep(name: &str, header: usize, entries: &Section, default_seed: u64) -> Result<Vec<Scenario>, ConfigError> {
    let missing = |key: &str| err(header, format!("section [{name}] lacks `{key}`"));
    let dist: DesignDist = value(entries, "design")?.ok_or_else(|| missing("design"))?;
    let ns = list(entries, "n")?.ok_or_else(|| missing("n"))?;
    let ks = list(entries, "k")?.ok_or_else(|| missing("k"))?;
    let p: usize = value(entries, "p")?.ok_or_else(|| missing("p"))?;
    let methods: MethodList = value(entries, "methods")?.ok_or_else(|| missing("methods"))?;
    let defaults = CvParams::default();
    let cv = CvParams {
        folds: value(entries, "folds")?.unwrap_or(defaults.folds),
        path: PathParams {
            c_count: value(entries, "path_length")?.unwrap_or(defaults.path.c_count),
            epsilon: value(entries, "epsilon")?.unwrap_or(defaults.path.epsilon),
        },
        ..defaults
    };

    let mut out = Vec::new();
    for &n in &ns {
        for &k in &ks {
            let id = match (ns.len() > 1, ks.len() > 1) {
                (false, false) => name.to_string(),
                (true, false) => format!("{name}-n{n}"),
                (false, true) => format!("{name}-k{k}"),
                (true, true) => format!("{name}-n{n}-k{k}"),
            };
            let mut sc = Scenario::new(id, dist, n, p, k, methods.0.clone());
            sc.reps = value(entries, "reps")?.unwrap_or(sc.reps);
            sc.seed = value(entries, "seed")?.unwrap_or(default_seed);
            sc.n_test = value(entries, "n_test")?.unwrap_or(sc.n_test);
            sc.placement = value::<Placement>(entries, "placement")?.unwrap_or_default();
            sc.sigma = value(entries, "sigma")?.unwrap_or(sc.sigma);
            sc.cv = cv;
            sc.sketch_rows = value(entries, "sketch_rows")?;
            sc.validate().map_err(|e| err(header, format!("[{name}]: {e}")))?;
            out.push(sc);
        }
    }
    Ok(out)
}

/// Parses a scenario file; `default_seed` applies to sections without `seed`.
pub fn parse_config(text: &str, default_seed: u64) -> Result<Vec<Sweep>, ConfigError> {
    let (defaults, sections) = parse_sections(text)?;
    if sections.is_empty() {
        return Err(err(1, "no [scenario] sections"));
    }
    sections
        .into_iter()
        .map(|(name, line, own)| {
            let mut merged = defaults.clone();
            merged.extend(own);
            Ok(Sweep {
                scenarios: build_sweep(&name, line, &merged, default_seed)?,
                name,
            })
        })
        .collect()
}
