//! The scalar tower: exact rationals, binary64 floats and their complexification.
//!
//! Everything algebraic in the crate is written against [`Scalar`], so the same
//! code runs exactly over [`Rational`] and approximately over `f64` or
//! [`Complex64`]. Float comparisons never use raw equality; they go through a
//! [`Tolerance`] or an explicit threshold.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// How the scalars of an algebra are represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl std::fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Absolute value as a float, used for pivoting and tolerance checks.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn half() -> Self {
        Self::from_rational(&Rational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Exactly zero in exact mode, `magnitude() <= tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    /// The exact value, when this scalar is a rational.
    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A computed scalar: always a complex approximation, plus the exact rational
/// value when one is known.
#[derive(Clone, Debug, PartialEq)]
pub struct Num {
    pub approx: Complex64,
    pub exact: Option<Rational>,
}

impl Num {
    pub fn exact(q: Rational) -> Self {
        Num { approx: Complex64::new(rational_to_f64(&q), 0.0), exact: Some(q) }
    }

    pub fn approx(z: Complex64) -> Self {
        Num { approx: z, exact: None }
    }

    pub fn real(x: f64) -> Self {
        Num::approx(Complex64::new(x, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.approx.re
    }

    /// Exactly real when exact, otherwise `|im| <= tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.exact.is_some() || self.approx.im.abs() <= tol
    }

    /// Sign of the real part, treating `|x| <= tol` as zero (exact zero in exact mode).
    pub fn sign(&self, tol: f64) -> i8 {
        match &self.exact {
            Some(q) => {
                if q.is_zero() {
                    0
                } else if q.is_negative() {
                    -1
                } else {
                    1
                }
            }
            None => sign_of(self.approx.re, tol),
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match &self.exact {
            Some(q) => q.is_zero(),
            None => self.approx.norm() <= tol,
        }
    }
}

/// Comparison thresholds for float mode.
///
/// `abs` bounds residuals; `rel` scales coordinate comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-9, rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(tol: f64) -> Self {
        Tolerance { abs: tol, rel: tol }
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }

    pub fn close_complex(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.abs + self.rel * a.norm().max(b.norm())
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Correctly rounded conversion (round half to even) of a rational to binary64.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer().abs();
    let den = q.denom();
    // Quotient carries at least 55 significant bits; below the normal range it
    // is measured in units of 2^-1076, two bits under the smallest subnormal.
    let shift = (num.bits() as i64 - den.bits() as i64 - 55).max(-1076);
    let (n, d) = if shift >= 0 {
        (num, den << (shift as usize))
    } else {
        (num << ((-shift) as usize), den.clone())
    };
    let (quot, rem) = num_integer::Integer::div_rem(&n, &d);
    let Some(mut bits) = quot.to_u64() else {
        return if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    };
    if !rem.is_zero() {
        bits |= 1;
    }
    // u64 -> f64 rounds half-even; the sticky bit sits below the rounding position.
    let half = shift / 2;
    let value = (bits as f64) * 2f64.powi(half as i32) * 2f64.powi((shift - half) as i32);
    if q.is_negative() {
        -value
    } else {
        value
    }
}

/// Exact rational value of a finite float.
pub fn f64_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q`, or a decimal such as `-1.25e-3` into an exact rational.
///
/// Returns the value and whether the literal was written as a decimal.
pub fn parse_rational_literal(text: &str) -> Option<(Rational, bool)> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some((Rational::new(p, q), false));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let is_decimal = mantissa.contains('.') || body.contains(['e', 'E']);
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let ten = BigInt::from(10);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= Rational::from_integer(factor);
    } else {
        value /= Rational::from_integer(factor);
    }
    Some((if negative { -value } else { value }, is_decimal))
}

/// Sign of a real scalar as -1, 0 or +1.
pub fn sign_of(x: f64, tol: f64) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_parsing() {
        assert_eq!(parse_rational_literal("2/3"), Some((rational(2, 3), false)));
        assert_eq!(parse_rational_literal("-7"), Some((int(-7), false)));
        assert_eq!(parse_rational_literal("1.25"), Some((rational(5, 4), true)));
        assert_eq!(parse_rational_literal("-1e-3"), Some((rational(-1, 1000), true)));
        assert_eq!(parse_rational_literal("1/0"), None);
        assert_eq!(parse_rational_literal("abc"), None);
        assert_eq!(parse_rational_literal("."), None);
    }

    #[test]
    fn conversion_is_correctly_rounded() {
        for s in ["0.1", "1.7320508", "0.57735", "-2.5e-300", "1e300", "3.14159265358979323846"] {
            let (q, _) = parse_rational_literal(s).unwrap();
            assert_eq!(rational_to_f64(&q), s.parse::<f64>().unwrap(), "{s}");
        }
        assert_eq!(rational_to_f64(&rational(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&rational(-2, 3)), -2.0 / 3.0);
        // subnormal
        let (q, _) = parse_rational_literal("4.9e-324").unwrap();
        assert_eq!(rational_to_f64(&q), 4.9e-324);
    }

    #[test]
    fn float_round_trip_through_rational() {
        for x in [0.1, -1.0 / 3.0, 1e-310, 12345.678, f64::MAX / 3.0] {
            let q = f64_to_rational(x).unwrap();
            assert_eq!(rational_to_f64(&q), x);
        }
    }

    #[test]
    fn negligible_is_exact_for_rationals() {
        assert!(!rational(1, 1_000_000_000_000).is_negligible(1e-3));
        assert!(1e-12f64.is_negligible(1e-9));
    }
}
