//! Small helpers around the two rational types used throughout the crate:
//! [`Rational64`] for exponents and orders, [`BigRational`] for coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational exponent of `q`.
pub type Exp = Rational64;

pub fn r64(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

pub fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big_from_r64(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Converts back to a machine rational; `None` on overflow.
pub fn r64_from_big(r: &BigRational) -> Option<Rational64> {
    Some(Rational64::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn ceil_r64(r: Rational64) -> i64 {
    r.ceil().to_integer()
}

pub fn floor_r64(r: Rational64) -> i64 {
    r.floor().to_integer()
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_r64(r: Rational64) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_big(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a plain decimal integer into a [`Rational64`].
pub fn parse_r64(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_big(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    if r.is_integer() {
        return r.numer().to_f64().unwrap_or(f64::NAN);
    }
    r.to_f64().unwrap_or_else(|| {
        // Very large numerator and denominator: scale both down first.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn r64_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn is_unit(n: &BigInt) -> bool {
    n.abs().is_one()
}

/// Serde adapter serializing a [`Rational64`] as a `"p/q"` string.
pub mod serde_r64 {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_r64(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
        let raw = RatRepr::deserialize(d)?;
        raw.into_r64().map_err(serde::de::Error::custom)
    }

    /// Accepts `"p/q"` strings and plain integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RatRepr {
        Str(String),
        Int(i64),
    }

    impl RatRepr {
        pub(crate) fn into_r64(self) -> Result<Rational64> {
            match self {
                RatRepr::Str(s) => parse_r64(&s),
                RatRepr::Int(i) => Ok(Rational64::from_integer(i)),
            }
        }
    }
}

/// Same as [`serde_r64`] for vectors.
pub mod serde_r64_vec {
    use super::serde_r64::RatRepr;
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_r64(*r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational64>, D::Error> {
        let raw = Vec::<RatRepr>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_r64().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Same as [`serde_r64`] for matrices.
pub mod serde_r64_mat {
    use super::serde_r64::RatRepr;
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| fmt_r64(*x)).collect()).collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational64>>, D::Error> {
        let raw = Vec::<Vec<RatRepr>>::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_r64().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_r64("-3/56").unwrap(), r64(-3, 56));
        assert_eq!(parse_r64(" 4 ").unwrap(), int(4));
        assert_eq!(fmt_r64(r64(6, 4)), "3/2");
        assert_eq!(fmt_r64(int(-2)), "-2");
        assert!(parse_r64("1/0").is_err());
        assert!(parse_r64("x").is_err());
        assert_eq!(fmt_big(&parse_big("10/4").unwrap()), "5/2");
    }

    #[test]
    fn huge_ratio_to_f64() {
        let n = BigInt::from(3) << 2000usize;
        let d = BigInt::from(2) << 2000usize;
        let r = BigRational::new(n, d);
        assert!((big_to_f64(&r) - 1.5).abs() < 1e-12);
    }
}
