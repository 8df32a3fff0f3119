//! Exact rationals and their `"p/q"` text encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in `{s}`"))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in `{s}`"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| format!("bad rational `{s}`"))?),
    };
    Ok(parsed)
}

/// Best-effort conversion for the numeric layer.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// A rational that serializes as a `"p/q"` string and also accepts bare integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QText(pub Q);

impl Serialize for QText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for QText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(QText(q(n))),
            Raw::Text(s) => parse_q(&s).map(QText).map_err(serde::de::Error::custom),
        }
    }
}

impl From<Q> for QText {
    fn from(x: Q) -> Self {
        QText(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        assert_eq!(format_q(&frac(6, -4)), "-3/2");
        assert_eq!(format_q(&q(7)), "7");
        assert_eq!(parse_q("-3/2").unwrap(), frac(-3, 2));
        assert_eq!(parse_q(" 12 ").unwrap(), q(12));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn qtext_accepts_integers() {
        let v: Vec<QText> = serde_json::from_str(r#"[3, "5/10"]"#).unwrap();
        assert_eq!(v[0].0, q(3));
        assert_eq!(v[1].0, frac(1, 2));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["3","1/2"]"#);
    }
}
