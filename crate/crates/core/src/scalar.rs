//! Scalar values for metric computations.
//!
//! Permutation, cyclic and rank metrics are exact rationals. Unitary metrics
//! are IEEE doubles compared under [`UNITARY_TOLERANCE`].

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Unitarity and numeric-metric tolerance.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    num_traits::Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn half(&self) -> Self;

    /// Equality, up to [`UNITARY_TOLERANCE`] for numeric scalars.
    fn approx_eq(&self, other: &Self) -> bool;

    /// `self <= other`, up to [`UNITARY_TOLERANCE`] for numeric scalars.
    fn approx_le(&self, other: &Self) -> bool;

    fn display(&self) -> String;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn half(&self) -> Self {
        self / Rational::from_integer(BigInt::from(2))
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self) -> bool {
        self <= other
    }

    fn display(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn half(&self) -> Self {
        self / 2.0
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= UNITARY_TOLERANCE
    }

    fn approx_le(&self, other: &Self) -> bool {
        *self <= other + UNITARY_TOLERANCE
    }

    fn display(&self) -> String {
        format!("{self}")
    }
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Formats as `a/b`, or `a` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.05`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::param(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::param(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" { "0" } else { whole };
        let w = BigInt::from_str(whole).map_err(|_| bad())?.abs();
        let f = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(w * &scale + f, scale);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn deserialize_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

/// Serde adapter for `Rational` fields, written as `"a/b"` strings.
pub mod rational_string {
    pub use super::deserialize_rational as deserialize;
    pub use super::serialize_rational as serialize;
}

pub fn rational_zero() -> Rational {
    Rational::zero()
}

pub fn rational_one() -> Rational {
    Rational::one()
}
