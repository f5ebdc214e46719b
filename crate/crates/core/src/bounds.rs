//! Explicit constants for the `q^n` upper and lower bounds, and sweeps that
//! certify them over parameter grids.

use std::fmt::{self, Display};
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;

use crate::definetti::{distance_with, DistanceReport};
use crate::error::{Error, Result};
use crate::qcore::{QBinomTable, QParam};
use crate::scalar::Scalar;

/// Upper-bound constant `c_k` with `||(e_{n,n1})_k - (nu_{q^{n1}})_k|| <= c_k q^n`
/// for every `n >= k` and every `n1`.
///
/// Each level `k1` of the distance sum contributes at most `[k,k1]` times the
/// larger of two case bounds:
///
/// * `B1 = sum_{i<k} q^{-i} / (1-q)^k`, covering `k1 = k` and the case where
///   the product difference is nonnegative;
/// * `B2(k1) = sum_{i<k-k1} q^{k1(k1-k)-i} / (1-q)^k` for `k1 < k`, covering
///   the negative case.
pub fn upper_constant<S: Scalar>(k: usize, q: &QParam<S>) -> S {
    if k == 0 {
        return S::zero();
    }
    let one_minus_q_k = (S::one() - q.value().clone()).powi(k as i64);
    let b1: S = (0..k).map(|i| q.pow(-(i as i64))).sum::<S>() / one_minus_q_k.clone();
    let table = QBinomTable::new(k, q);
    (0..=k)
        .map(|k1| {
            let b2 = if k1 == k {
                S::zero()
            } else {
                let shift = (k1 as i64) * (k1 as i64 - k as i64);
                (0..(k - k1) as i64).map(|i| q.pow(shift - i)).sum::<S>() / one_minus_q_k.clone()
            };
            let case_max = if b2 > b1 { b2 } else { b1.clone() };
            table.get(k, k1) * case_max
        })
        .sum()
}

/// Lower-bound constant `c~_k = (1-q)^{k-1} (q^{1-k} - q)`, valid for
/// `n1 >= k`.
pub fn lower_constant<S: Scalar>(k: usize, q: &QParam<S>) -> Result<S> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "the lower-bound constant needs k >= 1".into(),
        ));
    }
    let one_minus_q = S::one() - q.value().clone();
    Ok(one_minus_q.powi(k as i64 - 1) * (q.pow(1 - k as i64) - q.value().clone()))
}

/// Both sides of `(1 - P)/P >= sum_{i<k} q^{n-i}` with
/// `P = prod_{i<k} (1 - q^{n-i})`. The right side equals
/// `(q^{1-k} - q)/(1-q) q^n`.
pub fn tech_lemma_lhs_rhs<S: Scalar>(n: usize, k: usize, q: &QParam<S>) -> Result<(S, S)> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!(
            "need n >= k >= 1, got n = {n}, k = {k}"
        )));
    }
    let prod = (0..k).fold(S::one(), |acc, i| acc * (S::one() - q.pow((n - i) as i64)));
    let lhs = (S::one() - prod.clone()) / prod;
    let rhs = (q.pow(1 - k as i64) - q.value().clone()) / (S::one() - q.value().clone())
        * q.pow(n as i64);
    Ok((lhs, rhs))
}

/// Which `n1` values a sweep visits for each `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum N1Rule {
    Fixed(usize),
    /// `floor(n / 2)`
    Half,
    /// `n1 = n`
    Equal,
    List(Vec<usize>),
}

impl N1Rule {
    pub fn values(&self, n: usize) -> Vec<usize> {
        match self {
            N1Rule::Fixed(v) => vec![*v],
            N1Rule::Half => vec![n / 2],
            N1Rule::Equal => vec![n],
            N1Rule::List(vs) => vs.clone(),
        }
    }
}

impl Display for N1Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            N1Rule::Fixed(v) => write!(f, "fixed:{v}"),
            N1Rule::Half => f.write_str("half"),
            N1Rule::Equal => f.write_str("equal"),
            N1Rule::List(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "list:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for N1Rule {
    type Err = Error;

    /// `half`, `equal`, `fixed:<v>`, `list:<v>,<v>,...`, or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown n1 rule `{s}`"));
        match s {
            "half" => Ok(N1Rule::Half),
            "equal" => Ok(N1Rule::Equal),
            _ => {
                if let Some(v) = s.strip_prefix("fixed:") {
                    v.parse().map(N1Rule::Fixed).map_err(|_| bad())
                } else if let Some(vs) = s.strip_prefix("list:") {
                    let values = vs
                        .split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    if values.is_empty() {
                        return Err(bad());
                    }
                    Ok(N1Rule::List(values))
                } else {
                    s.parse().map(N1Rule::Fixed).map_err(|_| bad())
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RateSweepConfig<S> {
    pub q: QParam<S>,
    pub k: usize,
    pub n_range: RangeInclusive<usize>,
    pub n1_rule: N1Rule,
}

impl<S: Scalar> RateSweepConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if self.n_range.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "empty n range {}..{}",
                self.n_range.start(),
                self.n_range.end()
            )));
        }
        if *self.n_range.start() < self.k {
            return Err(Error::InvalidParameter(format!(
                "n range starts at {} but k = {}",
                self.n_range.start(),
                self.k
            )));
        }
        for n in self.n_range.clone() {
            if let Some(v) = self.n1_rule.values(n).into_iter().find(|&v| v > n) {
                return Err(Error::InvalidParameter(format!("n1 = {v} exceeds n = {n}")));
            }
        }
        Ok(())
    }

    fn grid(&self) -> Vec<(usize, usize)> {
        self.n_range
            .clone()
            .flat_map(|n| self.n1_rule.values(n).into_iter().map(move |n1| (n, n1)))
            .collect()
    }
}

/// Distance and both bounds for one `(n, n1, k)`.
pub fn distance_report<S: Scalar>(
    n: usize,
    n1: usize,
    k: usize,
    q: &QParam<S>,
) -> Result<DistanceReport<S>> {
    if k > n || n1 > n {
        return Err(Error::InvalidParameter(format!(
            "need k <= n and n1 <= n, got n = {n}, n1 = {n1}, k = {k}"
        )));
    }
    let upper_c = upper_constant(k, q);
    let lower_c = if k >= 1 {
        Some(lower_constant(k, q)?)
    } else {
        None
    };
    let table = QBinomTable::new(n, q);
    Ok(report_with(&table, n, n1, k, q, &upper_c, lower_c.as_ref()))
}

fn report_with<S: Scalar>(
    table: &QBinomTable<S>,
    n: usize,
    n1: usize,
    k: usize,
    q: &QParam<S>,
    upper_c: &S,
    lower_c: Option<&S>,
) -> DistanceReport<S> {
    let qn = q.pow(n as i64);
    DistanceReport {
        n,
        k,
        n1,
        q: q.clone(),
        distance: distance_with(table, n, n1, k, q),
        upper: upper_c.clone() * qn.clone(),
        lower: lower_c.filter(|_| n1 >= k).map(|c| c.clone() * qn),
    }
}

/// Reports for every grid point of the sweep, sorted by `(n, n1)`, without
/// checking the bounds.
pub fn compute_sweep<S: Scalar>(cfg: &RateSweepConfig<S>) -> Result<Vec<DistanceReport<S>>> {
    cfg.validate()?;
    let upper_c = upper_constant(cfg.k, &cfg.q);
    let lower_c = if cfg.k >= 1 {
        Some(lower_constant(cfg.k, &cfg.q)?)
    } else {
        None
    };
    let table = QBinomTable::new(*cfg.n_range.end(), &cfg.q);
    let mut reports: Vec<DistanceReport<S>> = cfg
        .grid()
        .into_par_iter()
        .map(|(n, n1)| report_with(&table, n, n1, cfg.k, &cfg.q, &upper_c, lower_c.as_ref()))
        .collect();
    reports.sort_by_key(|r| (r.n, r.n1));
    Ok(reports)
}

/// Runs the sweep and fails on the first report outside its bounds.
pub fn verify_rate<S: Scalar>(cfg: &RateSweepConfig<S>) -> Result<Vec<DistanceReport<S>>> {
    let reports = compute_sweep(cfg)?;
    if let Some(bad) = reports.iter().find(|r| !r.passes()) {
        return Err(Error::RateViolation(format!(
            "n = {}, n1 = {}, k = {}, q = {}: distance {} not within [{}, {}]",
            bad.n,
            bad.n1,
            bad.k,
            bad.q,
            bad.distance,
            bad.lower
                .as_ref()
                .map_or("-".to_string(), |l| l.to_string()),
            bad.upper
        )));
    }
    Ok(reports)
}

/// Least-squares slope of `ln(distance)` against `n`.
pub fn fit_log_slope<S: Scalar>(reports: &[DistanceReport<S>]) -> Result<f64> {
    if reports.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 reports, got {}",
            reports.len()
        )));
    }
    let first = &reports[0];
    if reports.iter().any(|r| r.k != first.k || r.q != first.q) {
        return Err(Error::InsufficientData(
            "reports mix different k or q".into(),
        ));
    }
    let mut points = Vec::with_capacity(reports.len());
    for r in reports {
        let d = r.distance.to_f64();
        if d.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InsufficientData(format!(
                "distance at n = {}, n1 = {} is not positive",
                r.n, r.n1
            )));
        }
        points.push((r.n as f64, d.ln()));
    }
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "all reports share the same n".into(),
        ));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(sxy / sxx)
}
