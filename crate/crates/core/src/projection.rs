//! Projections onto leading coordinates and total variation distance.

use crate::error::{Error, Result};
use crate::measures::{DenseMeasure, QExchMeasure};
use crate::qcore::{falling_pochhammer, QBinomTable, QParam};
use crate::scalar::Scalar;

/// Pushforward of `m` under the projection onto the first `k` coordinates.
///
/// Summing `q^{coinv}` over the suffixes of `s_{k,k1}` that complete it to
/// level `j` gives `q^{(j-k1)(k-k1)} [n-k, j-k1]`, so
/// `base'[k1] = sum_j base[j] q^{(j-k1)(k-k1)} [n-k, j-k1]`.
pub fn project<S: Scalar>(m: &QExchMeasure<S>, k: usize) -> Result<QExchMeasure<S>> {
    let n = m.n();
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot project words of length {n} onto {k} coordinates"
        )));
    }
    if k == n {
        return Ok(m.clone());
    }
    let tail = n - k;
    let table = QBinomTable::new(tail, m.q());
    let base = (0..=k)
        .map(|k1| {
            (k1..=k1 + tail)
                .map(|j| {
                    let b = &m.base()[j];
                    if b.is_zero() {
                        return S::zero();
                    }
                    m.q().pow(((j - k1) * (k - k1)) as i64) * table.get(tail, j - k1) * b.clone()
                })
                .sum()
        })
        .collect();
    Ok(QExchMeasure::from_base_unchecked(k, m.q().clone(), base))
}

/// `(e_{n,n1})_k(s_{k,k1}) = q^{(n1-k1)(k-k1)} [n-k, n1-k1] / [n, n1]`, zero
/// when the inner binomial is out of range.
pub fn project_extreme_closed_form<S: Scalar>(
    n: usize,
    n1: usize,
    k: usize,
    k1: usize,
    q: &QParam<S>,
) -> S {
    let table = QBinomTable::new(n, q);
    extreme_projection_with(&table, n, n1, k, k1, q)
}

pub(crate) fn extreme_projection_with<S: Scalar>(
    table: &QBinomTable<S>,
    n: usize,
    n1: usize,
    k: usize,
    k1: usize,
    q: &QParam<S>,
) -> S {
    if k1 > n1 || n1 - k1 > n - k {
        return S::zero();
    }
    q.pow(((n1 - k1) * (k - k1)) as i64) * table.get(n - k, n1 - k1) / table.get(n, n1)
}

/// `(nu_{q^{n1}})_k(s_{k,k1}) = q^{(n1-k1)(k-k1)} (q^{n1}; q^{-1})_{k1}`.
pub fn project_bernoulli_closed_form<S: Scalar>(
    n1: usize,
    k: usize,
    k1: usize,
    q: &QParam<S>,
) -> S {
    if k1 > n1 {
        return S::zero();
    }
    q.pow(((n1 - k1) * (k - k1)) as i64) * falling_pochhammer(n1, k1, q)
}

/// Total variation distance `sum_w |a(w) - b(w)|`, which equals
/// `2 sup_A |a(A) - b(A)|`.
pub trait TvDistance {
    type Output;

    fn tv_distance(&self, other: &Self) -> Result<Self::Output>;
}

impl<S: Scalar> TvDistance for DenseMeasure<S> {
    type Output = S;

    fn tv_distance(&self, other: &Self) -> Result<S> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "n = {} vs n = {}",
                self.n(),
                other.n()
            )));
        }
        Ok(self
            .weights()
            .iter()
            .zip(other.weights())
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .sum())
    }
}

/// Level by level: every word of level `k1` carries the same ratio between
/// the two measures, and the `q^{coinv}` weights of a level sum to `[n, k1]`.
impl<S: Scalar> TvDistance for QExchMeasure<S> {
    type Output = S;

    fn tv_distance(&self, other: &Self) -> Result<S> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "n = {} vs n = {}",
                self.n(),
                other.n()
            )));
        }
        if self.q() != other.q() {
            return Err(Error::DimensionMismatch(format!(
                "q = {} vs q = {}",
                self.q(),
                other.q()
            )));
        }
        let n = self.n();
        let table = QBinomTable::new(n, self.q());
        Ok(self
            .base()
            .iter()
            .zip(other.base())
            .enumerate()
            .map(|(k1, (a, b))| table.get(n, k1) * (a.clone() - b.clone()).abs())
            .sum())
    }
}

pub fn tv_distance<M: TvDistance>(a: &M, b: &M) -> Result<M::Output> {
    a.tv_distance(b)
}
