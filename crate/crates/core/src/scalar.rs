//! Scalar abstraction shared by polynomials, rational functions and
//! truncated matrices, plus helpers for the exact rational type.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::{Error, Rat, Result};

/// Field-like scalar the generic containers are written against.
///
/// Exactness is not part of the contract: the containers are correct for
/// any field, but zero tests on floats are only as good as the rounding.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type represents small integers")
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + PartialOrd
        + fmt::Debug
        + fmt::Display
        + Num
        + Neg<Output = T>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `"3"`, `"-3/4"` or a finite decimal such as `"1.25"` exactly.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {t:?}"),
    };
    if t.is_empty() {
        return Err(err("empty rational"));
    }
    if let Some((a, b)) = t.split_once('/') {
        let n = BigInt::from_str(a.trim()).map_err(|_| err("bad numerator"))?;
        let d = BigInt::from_str(b.trim()).map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let n = BigInt::from_str(&digits).map_err(|_| err("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n = BigInt::from_str(t).map_err(|_| err("bad integer"))?;
    Ok(Rat::from_integer(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Rational read from JSON as either a string (`"3/2"`) or a number (`2`,
/// `0.5`); always written back as a string.
#[derive(Clone, Debug, PartialEq)]
pub struct RatText(pub Rat);

impl serde::Serialize for RatText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Lit {
            S(String),
            N(serde_json::Number),
        }
        let text = match Lit::deserialize(d)? {
            Lit::S(s) => s,
            Lit::N(n) => n.to_string(),
        };
        parse_rat(&text).map(RatText).map_err(serde::de::Error::custom)
    }
}
