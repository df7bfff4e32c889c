use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, LogNormal, StandardNormal, StudentT};

use crate::error::Error;
use crate::rng::{self, Rng};

/// Law of the i.i.d. design entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignDist {
    Normal,
    LogNormal,
    T2,
    /// `0.25 (Z1 + Z2 + Z3 + Z4)` with `Z1 ~ N(0,1)`, `Z2 ~ t(2)`, `Z3 ~ t(3)`,
    /// `Z4 ~ lognormal(0,1)`.
    Mixture,
}

impl DesignDist {
    pub const ALL: [DesignDist; 4] = [Self::Normal, Self::LogNormal, Self::T2, Self::Mixture];

    pub fn name(self) -> &'static str {
        match self {
            Self::Normal => "normal",
            Self::LogNormal => "lognormal",
            Self::T2 => "t2",
            Self::Mixture => "mixture",
        }
    }
}

impl fmt::Display for DesignDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DesignDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "normal" | "standard-normal" | "n" | "gaussian" => Ok(Self::Normal),
            "lognormal" | "log-normal" => Ok(Self::LogNormal),
            "t2" | "t(2)" | "t" => Ok(Self::T2),
            "mixture" | "mix" => Ok(Self::Mixture),
            other => Err(Error::invalid(format!("unknown design distribution '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    pub dist: DesignDist,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
}

struct Sampler {
    t2: StudentT<f64>,
    t3: StudentT<f64>,
    lognormal: LogNormal<f64>,
}

impl Sampler {
    fn new() -> Self {
        Self {
            t2: StudentT::new(2.0).expect("valid degrees of freedom"),
            t3: StudentT::new(3.0).expect("valid degrees of freedom"),
            lognormal: LogNormal::new(0.0, 1.0).expect("valid lognormal"),
        }
    }

    fn draw(&self, dist: DesignDist, r: &mut Rng) -> f64 {
        match dist {
            DesignDist::Normal => StandardNormal.sample(r),
            DesignDist::LogNormal => self.lognormal.sample(r),
            DesignDist::T2 => self.t2.sample(r),
            DesignDist::Mixture => {
                let z1: f64 = StandardNormal.sample(r);
                let z2 = self.t2.sample(r);
                let z3 = self.t3.sample(r);
                let z4 = self.lognormal.sample(r);
                0.25 * z1 + 0.25 * z2 + 0.25 * z3 + 0.25 * z4
            }
        }
    }
}

/// Draws an `n x p` design, returned as `p` columns of length `n`.
///
/// Column `j` comes from its own stream derived from the seed, so a design's
/// leading columns do not depend on `p`.
pub fn gen_design(spec: &DesignSpec) -> Vec<Vec<f64>> {
    let sampler = Sampler::new();
    (0..spec.p)
        .map(|j| {
            let mut r = rng::rng(rng::derive_seed(spec.seed, j as u64));
            (0..spec.n).map(|_| sampler.draw(spec.dist, &mut r)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, var.sqrt())
    }

    #[test]
    fn standard_normal_moments() {
        let x = gen_design(&DesignSpec { dist: DesignDist::Normal, n: 100_000, p: 1, seed: 3 });
        let (m, sd) = moments(&x[0]);
        assert!(m.abs() < 0.02, "mean {m}");
        assert!((0.98..=1.02).contains(&sd), "sd {sd}");
    }

    #[test]
    fn lognormal_is_positive() {
        let x = gen_design(&DesignSpec { dist: DesignDist::LogNormal, n: 5_000, p: 3, seed: 4 });
        assert!(x.iter().flatten().all(|&v| v > 0.0));
        // Median of lognormal(0,1) is 1.
        let mut c = x[0].clone();
        c.sort_by(f64::total_cmp);
        assert!((c[2500] - 1.0).abs() < 0.1);
    }

    #[test]
    fn mixture_is_reproducible() {
        let spec = DesignSpec { dist: DesignDist::Mixture, n: 1_000, p: 4, seed: 5 };
        let a = gen_design(&spec);
        let b = gen_design(&spec);
        assert!(a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = gen_design(&DesignSpec { seed: 6, ..spec });
        assert_ne!(a, c);
    }

    #[test]
    fn t2_has_heavy_tails() {
        let x = gen_design(&DesignSpec { dist: DesignDist::T2, n: 20_000, p: 1, seed: 7 });
        // P(|t2| > 10) = 1 - 10/sqrt(102) ~ 0.0099; a normal would give essentially none.
        let tail = x[0].iter().filter(|v| v.abs() > 10.0).count() as f64 / 20_000.0;
        assert!((0.005..0.015).contains(&tail), "tail {tail}");
    }

    #[test]
    fn leading_columns_ignore_p() {
        let a = gen_design(&DesignSpec { dist: DesignDist::T2, n: 50, p: 2, seed: 8 });
        let b = gen_design(&DesignSpec { dist: DesignDist::T2, n: 50, p: 5, seed: 8 });
        assert_eq!(a[..], b[..2]);
    }

    #[test]
    fn parses_names() {
        for d in DesignDist::ALL {
            assert_eq!(d.name().parse::<DesignDist>().unwrap(), d);
        }
        assert_eq!("t(2)".parse::<DesignDist>().unwrap(), DesignDist::T2);
        assert!("cauchy".parse::<DesignDist>().is_err());
    }
}
