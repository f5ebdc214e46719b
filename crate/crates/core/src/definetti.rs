//! Convex decomposition into extreme measures, q-Bernoulli mixtures, and the
//! distance between a measure and its de Finetti approximation.

use crate::error::{Error, Result};
use crate::measures::{q_bernoulli, DeltaQPoint, QExchMeasure};
use crate::projection::{
    extreme_projection_with, project, project_bernoulli_closed_form, TvDistance,
};
use crate::qcore::{QBinomTable, QParam};
use crate::scalar::{Mode, Scalar};

/// Probability weights on the points `q^0, q^1, ..., q^n` of the q-deformed
/// interval.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingMeasure<S> {
    n: usize,
    q: QParam<S>,
    alpha: Vec<S>,
}

impl<S: Scalar> MixingMeasure<S> {
    pub fn new(q: QParam<S>, alpha: Vec<S>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidMeasure(
                "mixing measure needs at least one weight".into(),
            ));
        }
        if let Some(i) = alpha.iter().position(|a| a.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative weight at q^{i}")));
        }
        let mass: S = alpha.iter().cloned().sum();
        if !mass.close_to(&S::one()) {
            return Err(Error::InvalidMeasure(format!(
                "total mass is {mass}, expected 1"
            )));
        }
        Ok(MixingMeasure {
            n: alpha.len() - 1,
            q,
            alpha,
        })
    }

    /// Point mass at `q^exponent`.
    pub fn dirac(q: QParam<S>, exponent: usize) -> Self {
        let mut alpha = vec![S::zero(); exponent + 1];
        alpha[exponent] = S::one();
        MixingMeasure {
            n: exponent,
            q,
            alpha,
        }
    }

    /// Largest exponent carrying a weight slot.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &QParam<S> {
        &self.q
    }

    /// `alpha()[i]` is the mass at `q^i`.
    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }
}

/// Weights `alpha_i = P(C_{n,i})`, so that `m = sum_i alpha_i e_{n,i}`.
pub fn decompose<S: Scalar>(m: &QExchMeasure<S>) -> MixingMeasure<S> {
    MixingMeasure {
        n: m.n(),
        q: m.q().clone(),
        alpha: m.level_masses(),
    }
}

/// `sum_i alpha_i e_{n,i}`.
pub fn recompose<S: Scalar>(mu: &MixingMeasure<S>) -> QExchMeasure<S> {
    let n = mu.n;
    let table = QBinomTable::new(n, &mu.q);
    let base = mu
        .alpha
        .iter()
        .enumerate()
        .map(|(i, a)| a.clone() / table.get(n, i))
        .collect();
    QExchMeasure::from_base_unchecked(n, mu.q.clone(), base)
}

/// `P_{mu,n} = sum_i alpha_i nu_{q^i}` on `{0,1}^n`.
pub fn mixture<S: Scalar>(mu: &MixingMeasure<S>, n: usize) -> QExchMeasure<S> {
    let mut base = vec![S::zero(); n + 1];
    for (i, a) in mu.alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let nu = q_bernoulli(n, DeltaQPoint::new(i), &mu.q);
        for (acc, b) in base.iter_mut().zip(nu.base()) {
            *acc += a.clone() * b.clone();
        }
    }
    QExchMeasure::from_base_unchecked(n, mu.q.clone(), base)
}

/// `|| (e_{n,n1})_k - (nu_{q^{n1}})_k ||` through the level sum
/// `sum_{k1} [k,k1] q^{(n1-k1)(k-k1)} |[n-k, n1-k1]/[n, n1] - (q^{n1}; q^{-1})_{k1}|`.
pub fn extreme_vs_bernoulli_distance<S: Scalar>(
    n: usize,
    n1: usize,
    k: usize,
    q: &QParam<S>,
) -> Result<S> {
    if k > n || n1 > n {
        return Err(Error::InvalidParameter(format!(
            "need k <= n and n1 <= n, got n = {n}, n1 = {n1}, k = {k}"
        )));
    }
    let table = QBinomTable::new(n, q);
    Ok(distance_with(&table, n, n1, k, q))
}

pub(crate) fn distance_with<S: Scalar>(
    table: &QBinomTable<S>,
    n: usize,
    n1: usize,
    k: usize,
    q: &QParam<S>,
) -> S {
    (0..=k)
        .map(|k1| {
            let e = extreme_projection_with(table, n, n1, k, k1, q);
            let nu = project_bernoulli_closed_form(n1, k, k1, q);
            table.get(k, k1) * (e - nu).abs()
        })
        .sum()
}

/// `|| P_k - P_{mu,k} ||` with `mu = decompose(m)`.
pub fn approx_error<S: Scalar>(m: &QExchMeasure<S>, k: usize) -> Result<S> {
    let mu = decompose(m);
    let approx = mixture(&mu, m.n());
    project(m, k)?.tv_distance(&project(&approx, k)?)
}

/// Distance of one extreme measure from its q-Bernoulli partner, with the
/// upper bound `c_k q^n` and, when `n1 >= k`, the lower bound `c~_k q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport<S> {
    pub n: usize,
    pub k: usize,
    pub n1: usize,
    pub q: QParam<S>,
    pub distance: S,
    pub upper: S,
    pub lower: Option<S>,
}

impl<S: Scalar> DistanceReport<S> {
    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn upper_ok(&self) -> bool {
        self.distance <= self.upper
    }

    pub fn lower_ok(&self) -> bool {
        self.lower.as_ref().is_none_or(|l| l <= &self.distance)
    }

    pub fn passes(&self) -> bool {
        self.upper_ok() && self.lower_ok()
    }

    /// `distance / q^n`.
    pub fn dist_over_qn(&self) -> S {
        self.distance.clone() / self.q.pow(self.n as i64)
    }
}
