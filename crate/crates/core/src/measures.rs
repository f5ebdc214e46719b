//! q-exchangeable measures on `{0,1}^n`.
//!
//! A q-exchangeable measure gives every word of level `k` the weight
//! `q^{coinv(w)} * P(s_{n,k})`, so it is stored as the `n + 1` values
//! `P(s_{n,k})`. [`DenseMeasure`] is the explicit table used as a
//! brute-force oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::{coinversions, falling_pochhammer, QBinomTable, QParam, Word};
use crate::scalar::Scalar;

/// Largest `n` accepted by [`to_dense`].
pub const MAX_DENSE_N: usize = 24;

/// A q-exchangeable probability measure on `{0,1}^n`, stored by its values
/// on the canonical words `s_{n,k} = 1^k 0^{n-k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExchMeasure<S> {
    n: usize,
    q: QParam<S>,
    base: Vec<S>,
}

impl<S: Scalar> QExchMeasure<S> {
    /// Validates nonnegativity and total mass `sum_k base[k] [n,k] = 1`.
    pub fn from_base(n: usize, q: QParam<S>, base: Vec<S>) -> Result<Self> {
        if base.len() != n + 1 {
            return Err(Error::InvalidMeasure(format!(
                "expected {} base values for n = {n}, got {}",
                n + 1,
                base.len()
            )));
        }
        if let Some(k) = base.iter().position(|b| b.is_negative()) {
            return Err(Error::InvalidMeasure(format!(
                "negative base value at level {k}"
            )));
        }
        let m = QExchMeasure { n, q, base };
        let mass = m.total_mass();
        if !mass.close_to(&S::one()) {
            return Err(Error::InvalidMeasure(format!(
                "total mass is {mass}, expected 1"
            )));
        }
        Ok(m)
    }

    pub(crate) fn from_base_unchecked(n: usize, q: QParam<S>, base: Vec<S>) -> Self {
        debug_assert_eq!(base.len(), n + 1);
        QExchMeasure { n, q, base }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &QParam<S> {
        &self.q
    }

    /// `base()[k] = P(s_{n,k})`.
    pub fn base(&self) -> &[S] {
        &self.base
    }

    /// Total mass of each level `C_{n,k}`.
    pub fn level_masses(&self) -> Vec<S> {
        let table = QBinomTable::new(self.n, &self.q);
        self.base
            .iter()
            .enumerate()
            .map(|(k, b)| b.clone() * table.get(self.n, k))
            .collect()
    }

    pub fn total_mass(&self) -> S {
        self.level_masses().into_iter().sum()
    }
}

/// Explicit weights on all `2^n` words, indexed by packed bits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMeasure<S> {
    n: usize,
    weights: Vec<S>,
}

impl<S: Scalar> DenseMeasure<S> {
    pub fn new(n: usize, weights: Vec<S>) -> Result<Self> {
        if n > MAX_DENSE_N {
            return Err(Error::DimensionTooLarge {
                n,
                max: MAX_DENSE_N,
            });
        }
        if weights.len() != 1 << n {
            return Err(Error::InvalidMeasure(format!(
                "expected {} weights, got {}",
                1usize << n,
                weights.len()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        let mass: S = weights.iter().cloned().sum();
        if !mass.close_to(&S::one()) {
            return Err(Error::InvalidMeasure(format!(
                "total mass is {mass}, expected 1"
            )));
        }
        Ok(DenseMeasure { n, weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n > MAX_DENSE_N {
            return Err(Error::DimensionTooLarge {
                n,
                max: MAX_DENSE_N,
            });
        }
        let w = S::one() / S::from_int(1 << n);
        DenseMeasure::new(n, vec![w; 1 << n])
    }

    pub fn point_mass(w: &Word) -> Result<Self> {
        let n = w.len();
        if n > MAX_DENSE_N {
            return Err(Error::DimensionTooLarge {
                n,
                max: MAX_DENSE_N,
            });
        }
        let mut weights = vec![S::zero(); 1 << n];
        weights[w.bits() as usize] = S::one();
        Ok(DenseMeasure { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn get(&self, w: &Word) -> Result<S> {
        if w.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: w.len(),
            });
        }
        Ok(self.weights[w.bits() as usize].clone())
    }

    /// Pushforward onto the first `k` coordinates by summing over suffixes.
    pub fn marginal(&self, k: usize) -> Result<DenseMeasure<S>> {
        if k > self.n {
            return Err(Error::InvalidParameter(format!(
                "cannot project words of length {} onto {k} coordinates",
                self.n
            )));
        }
        let mask = (1usize << k) - 1;
        let mut weights = vec![S::zero(); 1 << k];
        for (bits, w) in self.weights.iter().enumerate() {
            weights[bits & mask] += w.clone();
        }
        Ok(DenseMeasure { n: k, weights })
    }

    /// Iterates over `(word, weight)` in packed order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, &S)> + '_ {
        let n = self.n;
        self.weights
            .iter()
            .enumerate()
            .map(move |(b, w)| (Word::from_raw(b as u64, n), w))
    }
}

/// A point `x = q^exponent` of the q-deformed unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeltaQPoint {
    pub exponent: usize,
}

impl DeltaQPoint {
    pub fn new(exponent: usize) -> Self {
        DeltaQPoint { exponent }
    }

    pub fn value<S: Scalar>(&self, q: &QParam<S>) -> S {
        q.pow(self.exponent as i64)
    }
}

/// The extreme measure `e_{n,k}`, uniform up to `q^{coinv}` on level `k`.
pub fn extreme_measure<S: Scalar>(n: usize, k: usize, q: &QParam<S>) -> Result<QExchMeasure<S>> {
    if k > n {
        return Err(Error::LevelOutOfRange { n, k });
    }
    let table = QBinomTable::new(n, q);
    let mut base = vec![S::zero(); n + 1];
    base[k] = S::one() / table.get(n, k);
    Ok(QExchMeasure::from_base_unchecked(n, q.clone(), base))
}

/// The q-Bernoulli measure `nu_x` on `{0,1}^n` with `x = q^exponent` the
/// probability of a zero.
///
/// `P(s_{n,k}) = q^{-k(n-k)} x^{n-k} (x; q^{-1})_k`, which simplifies to
/// `q^{(e-k)(n-k)} (q^e; q^{-1})_k` and vanishes for `k > e`.
pub fn q_bernoulli<S: Scalar>(n: usize, x: DeltaQPoint, q: &QParam<S>) -> QExchMeasure<S> {
    let e = x.exponent;
    let base = (0..=n)
        .map(|k| {
            if k > e {
                S::zero()
            } else {
                q.pow(((e - k) * (n - k)) as i64) * falling_pochhammer(e, k, q)
            }
        })
        .collect();
    QExchMeasure::from_base_unchecked(n, q.clone(), base)
}

pub fn eval<S: Scalar>(m: &QExchMeasure<S>, w: &Word) -> Result<S> {
    if w.len() != m.n {
        return Err(Error::LengthMismatch {
            expected: m.n,
            found: w.len(),
        });
    }
    Ok(m.q.pow(coinversions(w) as i64) * m.base[w.ones()].clone())
}

pub fn to_dense<S: Scalar>(m: &QExchMeasure<S>) -> Result<DenseMeasure<S>> {
    if m.n > MAX_DENSE_N {
        return Err(Error::DimensionTooLarge {
            n: m.n,
            max: MAX_DENSE_N,
        });
    }
    let max_coinv = m.n * m.n / 4;
    let q_pows: Vec<S> = (0..=max_coinv as i64).map(|e| m.q.pow(e)).collect();
    let weights = (0..1u64 << m.n)
        .map(|bits| {
            let w = Word::from_raw(bits, m.n);
            q_pows[coinversions(&w)].clone() * m.base[w.ones()].clone()
        })
        .collect();
    Ok(DenseMeasure { n: m.n, weights })
}

/// First word and 1-based position where the swap rule fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapViolation {
    pub word: Word,
    pub position: usize,
}

/// Checks `P(swap_i(w)) = q^{w_i - w_{i+1}} P(w)` for every word and every
/// adjacent pair, in packed order.
pub fn check_q_exchangeable<S: Scalar>(
    d: &DenseMeasure<S>,
    q: &QParam<S>,
) -> std::result::Result<(), SwapViolation> {
    let q_inv = S::one() / q.value().clone();
    for (w, p) in d.iter() {
        for position in 1..w.len() {
            let swapped = w.swap_adjacent(position);
            let expected = match (w.get(position), w.get(position + 1)) {
                (1, 0) => q.value().clone() * p.clone(),
                (0, 1) => q_inv.clone() * p.clone(),
                _ => p.clone(),
            };
            if !d.weights[swapped.bits() as usize].close_to(&expected) {
                return Err(SwapViolation { word: w, position });
            }
        }
    }
    Ok(())
}

pub fn is_q_exchangeable<S: Scalar>(d: &DenseMeasure<S>, q: &QParam<S>) -> bool {
    check_q_exchangeable(d, q).is_ok()
}

/// Seeded random q-exchangeable measure: integer level weights drawn from
/// `0..=1000`, normalized, then spread over each level by `q^{coinv}`.
///
/// The same seed gives the same measure in exact and float mode.
pub fn random_q_exch<S: Scalar>(n: usize, q: &QParam<S>, seed: u64) -> QExchMeasure<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<i64> = (0..=n).map(|_| rng.random_range(0..=1000)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.random_range(0..=n)] = 1;
    }
    let total: i64 = weights.iter().sum();
    let table = QBinomTable::new(n, q);
    let base = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| S::ratio(w, total) / table.get(n, k))
        .collect();
    QExchMeasure::from_base_unchecked(n, q.clone(), base)
}

/// Draws words from a q-exchangeable measure one bit at a time.
///
/// After a prefix of length `j` with `k1` ones, the next bit is one with
/// probability `q^{j-k1} b_{j+1}[k1+1] / (q^{j-k1} b_{j+1}[k1+1] + b_{j+1}[k1])`
/// where `b_j` is the base vector of the projection onto `j` coordinates. The
/// conditionals are computed in the measure's own arithmetic and converted to
/// `f64` once.
#[derive(Clone, Debug)]
pub struct Sampler {
    n: usize,
    // p_one[j][k1]: probability that bit j+1 is one given j earlier bits with k1 ones.
    p_one: Vec<Vec<f64>>,
}

impl Sampler {
    pub fn new<S: Scalar>(m: &QExchMeasure<S>) -> Result<Self> {
        if m.n > crate::qcore::MAX_PACKED_LEN {
            return Err(Error::WordTooLong(m.n));
        }
        let projections: Vec<QExchMeasure<S>> = (0..=m.n)
            .map(|j| crate::projection::project(m, j))
            .collect::<Result<_>>()?;
        let mut p_one = Vec::with_capacity(m.n);
        for j in 0..m.n {
            let next = &projections[j + 1].base;
            let row = (0..=j)
                .map(|k1| {
                    let one = m.q.pow((j - k1) as i64) * next[k1 + 1].clone();
                    let zero = next[k1].clone();
                    let total = one.clone() + zero;
                    if total.is_zero() {
                        0.0
                    } else {
                        (one / total).to_f64()
                    }
                })
                .collect();
            p_one.push(row);
        }
        Ok(Sampler { n: m.n, p_one })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        let mut bits = 0u64;
        let mut ones = 0;
        for j in 0..self.n {
            let u: f64 = rng.random();
            if u < self.p_one[j][ones] {
                bits |= 1 << j;
                ones += 1;
            }
        }
        Word::from_raw(bits, self.n)
    }
}

pub fn sample<S: Scalar, R: Rng + ?Sized>(m: &QExchMeasure<S>, rng: &mut R) -> Result<Word> {
    Ok(Sampler::new(m)?.sample(rng))
}
