//! Exact rational densities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("density {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("cannot parse rational {0:?}; expected \"p/q\" or an integer")]
    Parse(String),
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a terminating decimal such as `0.125`.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let int = if int.is_empty() || int == "-" { "0" } else { int };
        let whole = BigInt::from_str(int).map_err(|_| err())?.abs();
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let digits = BigInt::from_str(frac).map_err(|_| err())?;
        let v = BigRational::new(whole * &scale + digits, scale);
        return Ok(if negative { -v } else { v });
    }
    BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| err())
}

/// A density: an exact rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactDensity(BigRational);

impl ExactDensity {
    pub fn new(value: BigRational) -> Result<Self, ExactError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(ExactError::OutOfRange(rational_to_string(&value)));
        }
        Ok(ExactDensity(value))
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self, ExactError> {
        if denom == 0 {
            return Err(ExactError::Parse(format!("{numer}/{denom}")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    /// `1/n` for a positive degree `n`.
    pub fn reciprocal(n: u64) -> Self {
        assert!(n > 0, "reciprocal of zero degree");
        ExactDensity(BigRational::new(BigInt::one(), n.into()))
    }

    pub fn zero() -> Self {
        ExactDensity(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactDensity(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational_to_string(&self.0))
    }
}

impl FromStr for ExactDensity {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_rational(s)?)
    }
}

impl Serialize for ExactDensity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactDensity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a signed rational as a `p/q` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
