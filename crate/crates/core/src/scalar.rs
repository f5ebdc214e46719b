//! Number types used for probabilities and bounds.
//!
//! Every computation in the crate is generic over [`Scalar`]. Two
//! implementations exist: [`Rational`] (arbitrary-precision, exact) and `f64`
//! (binary floating point, for long sweeps where rationals grow too large).
//! A function instantiated with one type cannot receive values of the other,
//! so mixing modes is a type error rather than a silent conversion:
//!
//! ```compile_fail
//! use qdefinetti::scalar::{Rational, Scalar};
//! let exact = Rational::from_int(1);
//! let float = 0.5_f64;
//! let _ = exact + float;
//! ```

use std::fmt::{self, Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{NumAssign, Signed, ToPrimitive};
use num::{BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number with big-integer numerator and denominator.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Field operations needed by the q-combinatorics, measures and bounds.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Send + Sync + Signed + NumAssign + Sum + 'static
{
    const MODE: Mode;

    fn from_int(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality test used by invariant checks: exact equality for rationals,
    /// a relative tolerance of `1e-9` for floats.
    fn close_to(&self, other: &Self) -> bool;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, exp: i64) -> Self {
        if exp < 0 {
            return Self::one() / self.powi(-exp);
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                result *= base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        result
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn close_to(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= 1e-9 * scale
    }

    fn powi(&self, exp: i64) -> Self {
        f64::powf(*self, exp as f64)
    }
}

/// Parses a rational written as `p/r` or `p` with decimal digits.
///
/// Decimal points and exponents are rejected so that no precision is lost on
/// input.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a fraction of the form p/r"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    Ok(Rational::new(num, den))
}

/// Renders an exact rational as `p/r`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a float with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let half = r(1, 2);
        assert_eq!(half.powi(0), r(1, 1));
        assert_eq!(half.powi(5), r(1, 32));
        assert_eq!(half.powi(-3), r(8, 1));
        assert_eq!(r(2, 3).powi(4), r(16, 81));
        assert!((0.5_f64.powi(-3) - 8.0).abs() < 1e-15);
    }

    #[test]
    fn parse_accepts_fractions_only() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("4/8").unwrap(), r(1, 2));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("-1/3").unwrap(), r(-1, 3));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["1/2", "35/16", "0", "7", "-5/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn float_closeness_is_relative() {
        assert!(1.0_f64.close_to(&(1.0 + 1e-12)));
        assert!(!1.0_f64.close_to(&1.001));
        assert!(!r(1, 3).close_to(&r(1000000001, 3000000000)));
    }
}
