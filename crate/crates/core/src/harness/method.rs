use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Estimation method compared by the harness.
///
/// Parsed from `NAME` or `NAME(args)`, e.g. `D-OPT`, `SIS-IBOSS(250)`,
/// `LEV(250)`, `ALEV(250)`, `SPC(5/10)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// LASSO on the full data.
    Full,
    /// LASSO on a simple random sample.
    Unif,
    /// Leverage sampling with exact scores over all predictors.
    Lev,
    /// Leverage sampling with exact scores over the top-`s` screened predictors.
    LevScreened(usize),
    /// Leverage sampling with sketched scores over the top-`s` screened predictors.
    ApproxLev(usize),
    /// LASSO on IBOSS subdata.
    DOpt,
    /// LASSO on IBOSS subdata chosen over the top-`s` screened predictors.
    SisIboss(usize),
    /// Split-and-conquer with vote threshold `w` over `k` chunks.
    Spc { w: usize, k: usize },
}

impl Method {
    pub fn selects_rows(self) -> bool {
        !matches!(self, Method::Full | Method::Spc { .. })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Method::Full => write!(f, "FULL"),
            Method::Unif => write!(f, "UNIF"),
            Method::Lev => write!(f, "LEV"),
            Method::LevScreened(s) => write!(f, "LEV({s})"),
            Method::ApproxLev(s) => write!(f, "ALEV({s})"),
            Method::DOpt => write!(f, "D-OPT"),
            Method::SisIboss(s) => write!(f, "SIS-IBOSS({s})"),
            Method::Spc { w, k } => write!(f, "SPC({w}/{k})"),
        }
    }
}

fn parse_args(s: &str, text: &str) -> Result<Vec<usize>, Error> {
    s.split([',', '/'])
        .map(|a| {
            a.trim()
                .parse::<usize>()
                .map_err(|_| Error::BadMethod(format!("'{text}': argument '{}' is not a count", a.trim())))
        })
        .collect()
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let (name, args) = match t.find('(') {
            Some(open) => {
                let close = t
                    .strip_suffix(')')
                    .ok_or_else(|| Error::BadMethod(format!("'{text}': missing closing parenthesis")))?;
                (&t[..open], parse_args(&close[open + 1..], text)?)
            }
            None => (t, Vec::new()),
        };
        let name = name.trim().to_ascii_uppercase();
        let bad = |why: &str| Error::BadMethod(format!("'{text}': {why}"));
        let one = |args: &[usize]| match args {
            [s] if *s > 0 => Ok(*s),
            _ => Err(bad("expected one positive argument")),
        };
        match (name.as_str(), args.as_slice()) {
            ("FULL", []) => Ok(Method::Full),
            ("UNIF", []) => Ok(Method::Unif),
            ("LEV", []) => Ok(Method::Lev),
            ("LEV", a) => Ok(Method::LevScreened(one(a)?)),
            ("ALEV", a) => Ok(Method::ApproxLev(one(a)?)),
            ("D-OPT" | "DOPT" | "IBOSS", []) => Ok(Method::DOpt),
            ("SIS-IBOSS", a) => Ok(Method::SisIboss(one(a)?)),
            ("SPC", [w, k]) if *w >= 1 && w <= k => Ok(Method::Spc { w: *w, k: *k }),
            ("SPC", _) => Err(bad("expected SPC(w/K) with 1 <= w <= K")),
            ("FULL" | "UNIF" | "D-OPT" | "DOPT" | "IBOSS", _) => Err(bad("takes no arguments")),
            _ => Err(bad("unknown method")),
        }
    }
}
