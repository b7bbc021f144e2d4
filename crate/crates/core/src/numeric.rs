//! Scalar backends: exact rationals and binary64.
//!
//! Every algorithm in the crate is written against [`Scalar`]. For the exact
//! backend the tolerance arguments are ignored and comparisons are equality.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Default absolute tolerance for binary64 equality.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for the exact backend.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality within `tol` (exact equality for rationals).
    fn near(&self, other: &Self, tol: f64) -> bool;
    fn is_finite_value(&self) -> bool;
    /// Exact value, when the backend has one.
    fn to_rational(&self) -> Option<Rational>;
    /// Text form used by the graph and matrix file formats.
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    /// Strictly below zero beyond tolerance.
    fn is_negative_beyond(&self, tol: f64) -> bool {
        if Self::EXACT {
            *self < Self::zero()
        } else {
            self.to_f64() < -tol
        }
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        self.near(&Self::zero(), tol)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_text(&self) -> String {
        format_rational(self)
    }

    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn to_text(&self) -> String {
        // Display for f64 is the shortest string that round-trips.
        format!("{self}")
    }

    fn parse_text(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid number `{s}`")))?;
        if !v.is_finite() {
            return Err(Error::NonFiniteWeight);
        }
        Ok(v)
    }
}

/// Groups values into classes of (near-)equal values.
///
/// Class ids increase with value. For binary64 the grouping is single-linkage
/// on the sorted values: consecutive values within `tol` share a class.
pub fn classify<T: Scalar>(values: &[T], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(Ordering::Equal)
    });
    let mut class = vec![0; values.len()];
    let mut current = 0;
    for w in 0..order.len() {
        if w > 0 && !values[order[w - 1]].near(&values[order[w]], tol) {
            current += 1;
        }
        class[order[w]] = current;
    }
    class
}

/// Parses `12`, `-0.25`, `1.5e-3` or `3/7` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Finite decimal expansion when one exists, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_multiple_of(&two) {
        d /= &two;
        twos += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Exact rational value of a binary64 number.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or(Error::NonFiniteWeight)
}

/// Shorthand for small integer rationals.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
