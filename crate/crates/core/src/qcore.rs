//! q-integers, q-binomials, q-Pochhammer products and statistics of binary
//! words.

use std::fmt::{self, Display};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Largest word length that fits the packed representation.
pub const MAX_PACKED_LEN: usize = 63;

/// The deformation parameter `q`, strictly between 0 and 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam<S> {
    value: S,
}

impl<S: Scalar> QParam<S> {
    pub fn new(value: S) -> Result<Self> {
        if value > S::zero() && value < S::one() {
            Ok(QParam { value })
        } else {
            Err(Error::InvalidQ(value.to_string()))
        }
    }

    /// Builds `q` from an exact fraction, converting to the target mode.
    pub fn from_rational(r: &Rational) -> Result<Self> {
        if r <= &Rational::from_int(0) || r >= &Rational::from_int(1) {
            return Err(Error::InvalidQ(format_rational(r)));
        }
        Ok(QParam {
            value: S::from_rational(r),
        })
    }

    /// Parses `"p/r"`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_rational(&parse_rational(s)?)
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    /// `q^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> S {
        self.value.powi(e)
    }
}

impl<S: Scalar> Display for QParam<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.value, f)
    }
}

/// A binary word of length at most 63, bit `i` holding position `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_PACKED_LEN {
            return Err(Error::WordTooLong(len));
        }
        if bits >> len != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#b} do not fit in a word of length {len}"
            )));
        }
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    pub(crate) fn from_raw(bits: u64, len: usize) -> Self {
        debug_assert!(len <= MAX_PACKED_LEN && bits >> len == 0);
        Word {
            bits,
            len: len as u8,
        }
    }

    pub fn from_slice(seq: &[u8]) -> Result<Self> {
        if seq.len() > MAX_PACKED_LEN {
            return Err(Error::WordTooLong(seq.len()));
        }
        let mut bits = 0u64;
        for (i, &b) in seq.iter().enumerate() {
            match b {
                0 => {}
                1 => bits |= 1 << i,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "{other} is not a binary digit"
                    )))
                }
            }
        }
        Ok(Word {
            bits,
            len: seq.len() as u8,
        })
    }

    /// `s_{n,k}`: `k` ones followed by `n - k` zeros.
    pub fn canonical(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::LevelOutOfRange { n, k });
        }
        Word::new(low_mask(k), n)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Entry at 1-based `position`.
    pub fn get(&self, position: usize) -> u8 {
        assert!(
            position >= 1 && position <= self.len(),
            "position {position} out of range"
        );
        ((self.bits >> (position - 1)) & 1) as u8
    }

    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    /// Swaps the entries at 1-based positions `position` and `position + 1`.
    pub fn swap_adjacent(&self, position: usize) -> Word {
        assert!(
            position >= 1 && position < self.len(),
            "no adjacent pair at {position}"
        );
        let i = position - 1;
        let a = (self.bits >> i) & 1;
        let b = (self.bits >> (i + 1)) & 1;
        let mut bits = self.bits & !(0b11 << i);
        bits |= (b << i) | (a << (i + 1));
        Word {
            bits,
            len: self.len,
        }
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (1..=self.len()).map(|p| self.get(p)).collect()
    }
}

impl Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for p in 1..=self.len() {
            if p > 1 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.get(p))?;
        }
        f.write_str(")")
    }
}

pub(crate) fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Pairs `i < j` with a one at `i` and a zero at `j`.
pub fn inversions(w: &Word) -> usize {
    let mut ones_seen = 0;
    let mut count = 0;
    for p in 0..w.len() {
        if (w.bits >> p) & 1 == 1 {
            ones_seen += 1;
        } else {
            count += ones_seen;
        }
    }
    count
}

/// Pairs `i < j` with a zero at `i` and a one at `j`. This is the exponent
/// of `q` in the weight of a word under every q-exchangeable measure.
pub fn coinversions(w: &Word) -> usize {
    let mut zeros_seen = 0;
    let mut count = 0;
    for p in 0..w.len() {
        if (w.bits >> p) & 1 == 1 {
            count += zeros_seen;
        } else {
            zeros_seen += 1;
        }
    }
    count
}

/// `[n] = 1 + q + ... + q^{n-1}`.
pub fn q_int<S: Scalar>(n: usize, q: &QParam<S>) -> S {
    let mut acc = S::zero();
    let mut term = S::one();
    for _ in 0..n {
        acc += term.clone();
        term *= q.value().clone();
    }
    acc
}

pub fn q_factorial<S: Scalar>(n: usize, q: &QParam<S>) -> S {
    (1..=n).fold(S::one(), |acc, i| acc * q_int(i, q))
}

/// Gaussian binomial `[n, k]`, by the additive recurrence
/// `[n, k] = q^k [n-1, k] + [n-1, k-1]`.
pub fn q_binomial<S: Scalar>(n: usize, k: usize, q: &QParam<S>) -> Result<S> {
    if k > n {
        return Err(Error::LevelOutOfRange { n, k });
    }
    let table = QBinomTable::new(n, q);
    Ok(table.get(n, k))
}

/// Rows `0..=max_n` of Gaussian binomials, computed once by the recurrence.
///
/// The table is immutable after construction and may be shared between
/// threads freely.
#[derive(Clone, Debug)]
pub struct QBinomTable<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> QBinomTable<S> {
    pub fn new(max_n: usize, q: &QParam<S>) -> Self {
        let q_pows: Vec<S> = (0..=max_n as i64).map(|e| q.pow(e)).collect();
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![S::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(S::one());
            for k in 1..n {
                row.push(q_pows[k].clone() * prev[k].clone() + prev[k - 1].clone());
            }
            row.push(S::one());
            rows.push(row);
        }
        QBinomTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `[n, k]`, zero when `k < 0` or `k > n`.
    pub fn get_signed(&self, n: i64, k: i64) -> S {
        if n < 0 || k < 0 || k > n {
            return S::zero();
        }
        self.get(n as usize, k as usize)
    }

    pub fn get(&self, n: usize, k: usize) -> S {
        if k > n {
            return S::zero();
        }
        assert!(
            n <= self.max_n(),
            "q-binomial table holds rows up to {}",
            self.max_n()
        );
        self.rows[n][k].clone()
    }

    pub fn row(&self, n: usize) -> &[S] {
        &self.rows[n]
    }
}

/// `(x; t)_n = prod_{i<n} (1 - x t^i)`.
pub fn q_pochhammer<S: Scalar>(x: &S, t: &S, n: usize) -> S {
    let mut acc = S::one();
    let mut factor = x.clone();
    for _ in 0..n {
        acc *= S::one() - factor.clone();
        factor *= t.clone();
    }
    acc
}

/// `(q^e; q^{-1})_m = prod_{i<m} (1 - q^{e-i})`, evaluated without forming
/// negative powers. Vanishes when `m > e`.
pub fn falling_pochhammer<S: Scalar>(e: usize, m: usize, q: &QParam<S>) -> S {
    if m > e {
        return S::zero();
    }
    let mut acc = S::one();
    for i in 0..m {
        acc *= S::one() - q.pow((e - i) as i64);
    }
    acc
}

/// Iterator over `C_{n,k}` in increasing packed order.
#[derive(Clone, Debug)]
pub struct LevelIter {
    next: Option<u64>,
    len: usize,
    limit: u64,
}

pub fn enumerate_level(n: usize, k: usize) -> Result<LevelIter> {
    if n > MAX_PACKED_LEN {
        return Err(Error::WordTooLong(n));
    }
    if k > n {
        return Err(Error::LevelOutOfRange { n, k });
    }
    Ok(LevelIter {
        next: Some(low_mask(k)),
        len: n,
        limit: 1u64 << n,
    })
}

impl Iterator for LevelIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let x = self.next?;
        // Gosper's hack: next larger integer with the same popcount.
        self.next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let y = (((r ^ x) >> 2) / c) | r;
            (y < self.limit && y > x).then_some(y)
        };
        Some(Word::from_raw(x, self.len))
    }
}
