//! Exact rational scalars for the exponent calculus.
//!
//! Every exponent formula in the crate is piecewise linear in `alpha` and
//! `1/q` with small integer coefficients, so `i64` ratios never overflow in
//! practice and exact comparison is free.  The Lebesgue exponent `q` gets
//! its own type with a distinguished infinity so that `1/q = 0` is exact
//! rather than "a very small number" (which would perturb tie-breaking).

use num::rational::Ratio;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub fn integer(v: i64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `p/q`, plain integers, and finite decimals (`0.25` -> 1/4).
impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: i64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(Rational::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
            let whole: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| format!("bad number {s:?}"))?
            };
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("bad decimal {s:?}"));
            }
            let digits: i64 = frac.parse().map_err(|_| format!("bad decimal {s:?}"))?;
            let scale = 10i64.pow(frac.len() as u32);
            return Ok(Rational::new(whole * scale + sign * digits, scale));
        }
        let v: i64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
        Ok(Rational::integer(v))
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Lebesgue exponent: a rational in `[1, inf)` or the point at infinity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QVal {
    Finite(Rational),
    Infinity,
}

impl QVal {
    pub fn finite(numer: i64, denom: i64) -> Self {
        QVal::Finite(Rational::new(numer, denom))
    }

    pub fn integer(v: i64) -> Self {
        QVal::Finite(Rational::integer(v))
    }

    /// `1/q`, exactly zero at infinity.
    pub fn inv(&self) -> Rational {
        match self {
            QVal::Finite(r) => Rational::one() / *r,
            QVal::Infinity => Rational::zero(),
        }
    }

    pub fn at_least(&self, bound: Rational) -> bool {
        match self {
            QVal::Finite(r) => *r >= bound,
            QVal::Infinity => true,
        }
    }

    pub fn at_most(&self, bound: Rational) -> bool {
        match self {
            QVal::Finite(r) => *r <= bound,
            QVal::Infinity => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, QVal::Finite(_))
    }

    /// `1/q` as a float, for the numerical layers.
    pub fn inv_f64(&self) -> f64 {
        self.inv().to_f64()
    }
}

impl fmt::Display for QVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QVal::Finite(r) => write!(f, "{r}"),
            QVal::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for QVal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            Ok(QVal::Infinity)
        } else {
            Ok(QVal::Finite(t.parse()?))
        }
    }
}

impl Serialize for QVal {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QVal {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reduces() {
        let a = Rational::new(2, 4);
        assert_eq!(a, Rational::new(1, 2));
        assert_eq!((a + Rational::new(1, 3)).to_string(), "5/6");
        assert_eq!((a * Rational::integer(4)).to_string(), "2");
        assert_eq!((-a).to_string(), "-1/2");
        assert_eq!(Rational::new(-3, -6), Rational::new(1, 2));
    }

    #[test]
    fn parsing_forms() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), Rational::new(3, 4));
        assert_eq!("-2".parse::<Rational>().unwrap(), Rational::integer(-2));
        assert_eq!("0.25".parse::<Rational>().unwrap(), Rational::new(1, 4));
        assert_eq!("-1.5".parse::<Rational>().unwrap(), Rational::new(-3, 2));
        assert_eq!("3.".parse::<Rational>().unwrap_err().contains("bad"), true);
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn q_infinity_inverts_to_zero() {
        assert_eq!(QVal::Infinity.inv(), Rational::zero());
        assert_eq!(QVal::finite(5, 2).inv(), Rational::new(2, 5));
        assert_eq!("inf".parse::<QVal>().unwrap(), QVal::Infinity);
        assert_eq!("5/2".parse::<QVal>().unwrap(), QVal::finite(5, 2));
        assert_eq!(QVal::Infinity.to_string(), "inf");
    }

    #[test]
    fn ordering_is_exact() {
        assert!(Rational::new(1, 3) < Rational::new(34, 100));
        assert!(Rational::new(-1, 2) < Rational::zero());
        assert_eq!(
            Rational::new(1, 3).max(Rational::new(1, 4)),
            Rational::new(1, 3)
        );
    }

    #[test]
    fn serde_round_trip() {
        let v = Rational::new(-7, 3);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "\"-7/3\"");
        assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), v);
        let q = QVal::Infinity;
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "\"inf\"");
        assert_eq!(serde_json::from_str::<QVal>(&s).unwrap(), q);
    }
}
