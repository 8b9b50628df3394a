//! Arithmetic backends.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`], which is
//! implemented for `f64` (the certificate pipeline) and [`Rational`] (exact
//! identity checks and interpolation).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::linalg;

pub type Rational = BigRational;

pub trait Scalar: Clone + fmt::Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// Whether arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Converts a binary64 value; exact for [`Rational`].
    fn from_float(x: f64) -> Self;

    fn ratio(num: i64, den: i64) -> Self;

    fn as_f64(&self) -> f64;

    /// Determinant of a square matrix given by rows.
    fn determinant(rows: Vec<Vec<Self>>) -> Self;

    fn from_usize(k: usize) -> Self {
        Self::ratio(k as i64, 1)
    }

    fn powu(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_float(x: f64) -> Self {
        x
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_partial_pivot(rows)
    }

    fn powu(&self, exp: usize) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_float(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_rational(rows)
    }
}

/// Parses `"3/4"`, `"-2"`, `"0.125"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}
