//! JSON records for measures, with every rational written as a `"p/r"`
//! string so that exact values round-trip bit for bit.
//!
//! ```json
//! {"n": 2, "q": "1/2", "base": ["1/4", "1/2", "0"]}
//! {"n": 2, "q": "1/2", "alpha": ["1/4", "3/4", "0"]}
//! ```

use serde::{Deserialize, Serialize};

use crate::definetti::MixingMeasure;
use crate::error::{Error, Result};
use crate::measures::QExchMeasure;
use crate::qcore::QParam;
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureRecord {
    pub n: usize,
    pub q: String,
    pub base: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingRecord {
    pub n: usize,
    pub q: String,
    pub alpha: Vec<String>,
}

fn parse_values(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|v| parse_rational(v)).collect()
}

impl From<&QExchMeasure<Rational>> for MeasureRecord {
    fn from(m: &QExchMeasure<Rational>) -> Self {
        MeasureRecord {
            n: m.n(),
            q: format_rational(m.q().value()),
            base: m.base().iter().map(format_rational).collect(),
        }
    }
}

impl MeasureRecord {
    /// Validates length, nonnegativity and total mass.
    pub fn to_measure(&self) -> Result<QExchMeasure<Rational>> {
        let q = QParam::parse(&self.q)?;
        QExchMeasure::from_base(self.n, q, parse_values(&self.base)?)
    }
}

impl From<&MixingMeasure<Rational>> for MixingRecord {
    fn from(mu: &MixingMeasure<Rational>) -> Self {
        MixingRecord {
            n: mu.n(),
            q: format_rational(mu.q().value()),
            alpha: mu.alpha().iter().map(format_rational).collect(),
        }
    }
}

impl MixingRecord {
    pub fn to_mixing(&self) -> Result<MixingMeasure<Rational>> {
        if self.alpha.len() != self.n + 1 {
            return Err(Error::InvalidMeasure(format!(
                "expected {} weights for n = {}, got {}",
                self.n + 1,
                self.n,
                self.alpha.len()
            )));
        }
        let q = QParam::parse(&self.q)?;
        MixingMeasure::new(q, parse_values(&self.alpha)?)
    }
}

pub fn measure_to_json(m: &QExchMeasure<Rational>) -> String {
    serde_json::to_string_pretty(&MeasureRecord::from(m)).expect("record serializes")
}

pub fn measure_from_json(s: &str) -> Result<QExchMeasure<Rational>> {
    serde_json::from_str::<MeasureRecord>(s)?.to_measure()
}

pub fn mixing_to_json(mu: &MixingMeasure<Rational>) -> String {
    serde_json::to_string_pretty(&MixingRecord::from(mu)).expect("record serializes")
}

pub fn mixing_from_json(s: &str) -> Result<MixingMeasure<Rational>> {
    serde_json::from_str::<MixingRecord>(s)?.to_mixing()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definetti::decompose;
    use crate::measures::{extreme_measure, q_bernoulli, random_q_exch, DeltaQPoint};
    use proptest::prelude::*;

    #[test]
    fn record_layout() {
        let half = QParam::parse("1/2").unwrap();
        let nu = q_bernoulli(2, DeltaQPoint::new(1), &half);
        let json = serde_json::to_string(&MeasureRecord::from(&nu)).unwrap();
        assert_eq!(json, r#"{"n":2,"q":"1/2","base":["1/4","1/2","0"]}"#);
        let mu = decompose(&nu);
        let json = serde_json::to_string(&MixingRecord::from(&mu)).unwrap();
        assert_eq!(json, r#"{"n":2,"q":"1/2","alpha":["1/4","3/4","0"]}"#);
    }

    #[test]
    fn rejects_invalid_records() {
        let bad_mass = r#"{"n":1,"q":"1/2","base":["1/2","2/5"]}"#;
        assert!(matches!(
            measure_from_json(bad_mass),
            Err(Error::InvalidMeasure(_))
        ));
        let negative = r#"{"n":1,"q":"1/2","base":["3/2","-1/2"]}"#;
        assert!(matches!(
            measure_from_json(negative),
            Err(Error::InvalidMeasure(_))
        ));
        let decimal = r#"{"n":1,"q":"0.5","base":["1/2","1/2"]}"#;
        assert!(matches!(measure_from_json(decimal), Err(Error::Parse(_))));
        let bad_q = r#"{"n":1,"q":"1/1","base":["1/2","1/2"]}"#;
        assert!(matches!(measure_from_json(bad_q), Err(Error::InvalidQ(_))));
        assert!(matches!(measure_from_json("{"), Err(Error::Json(_))));
        let extra = r#"{"n":1,"q":"1/2","base":["1/2","1/2"],"x":1}"#;
        assert!(matches!(measure_from_json(extra), Err(Error::Json(_))));
        let short = r#"{"n":2,"q":"1/2","alpha":["1/2","1/2"]}"#;
        assert!(matches!(
            mixing_from_json(short),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn extreme_measure_round_trip() {
        let q = QParam::parse("2/3").unwrap();
        let e = extreme_measure(7, 3, &q).unwrap();
        assert_eq!(measure_from_json(&measure_to_json(&e)).unwrap(), e);
    }

    proptest! {
        #[test]
        fn random_measures_round_trip(n in 0usize..14, seed in any::<u64>(), num in 1i64..9) {
            let q = QParam::from_rational(&Rational::new(num.into(), 10.into())).unwrap();
            let m = random_q_exch(n, &q, seed);
            prop_assert_eq!(measure_from_json(&measure_to_json(&m)).unwrap(), m.clone());
            let mu = decompose(&m);
            prop_assert_eq!(mixing_from_json(&mixing_to_json(&mu)).unwrap(), mu);
        }
    }
}
