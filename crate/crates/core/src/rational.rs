//! Exact rationals and points on the unit circle `R/Z`.
//!
//! [`Rational`] wraps an arbitrary-precision fraction kept in lowest terms with
//! a positive denominator. It serializes as the string `p/q`, or `p` when the
//! denominator is one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics when `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Representative of `self` modulo one in `[0, 1)`.
    pub fn fract_floor(&self) -> Self {
        Rational(&self.0 - BigRational::from_integer(self.floor()))
    }

    pub fn floor_i64(&self) -> Option<i64> {
        self.floor().to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Rational::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseRational(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of `R/Z`, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    pub fn new(t: &Rational) -> Self {
        CirclePoint(t.fract_floor())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        CirclePoint::new(&Rational::new(num, den))
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// The point `k * t`.
    pub fn scale(&self, k: i64) -> CirclePoint {
        CirclePoint::new(&(&self.0 * Rational::integer(k)))
    }

    /// The reflected point `-t`.
    pub fn reflect(&self) -> CirclePoint {
        CirclePoint::new(&-&self.0)
    }
}

impl From<Rational> for CirclePoint {
    fn from(t: Rational) -> Self {
        CirclePoint::new(&t)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Rational::deserialize(deserializer).map(CirclePoint::from)
    }
}

/// Distance from `t` to the nearest integer, `min(t, 1 - t)` on the representative.
pub fn circle_norm(t: &CirclePoint) -> Rational {
    let v = t.value();
    let other = Rational::one() - v;
    match v.cmp(&other) {
        Ordering::Greater => other,
        _ => v.clone(),
    }
}

/// `‖x‖` for an arbitrary rational, reducing modulo one first.
pub fn norm_of(x: &Rational) -> Rational {
    circle_norm(&CirclePoint::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(circle_norm(&CirclePoint::zero()), Rational::zero());
        assert_eq!(circle_norm(&CirclePoint::from_ratio(1, 3)), r("1/3"));
        assert_eq!(circle_norm(&CirclePoint::from_ratio(3, 4)), r("1/4"));
        assert_eq!(circle_norm(&CirclePoint::from_ratio(1, 2)), r("1/2"));
    }

    #[test]
    fn point_reduces_mod_one() {
        assert_eq!(CirclePoint::from_ratio(7, 3).value(), &r("1/3"));
        assert_eq!(CirclePoint::from_ratio(-1, 4).value(), &r("3/4"));
        assert_eq!(CirclePoint::from_ratio(-2, 1).value(), &Rational::zero());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Rational::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rational::integer(5).to_string(), "5");
        assert_eq!(r(" 10/4 "), Rational::new(5, 2));
        assert_eq!(r("-7"), Rational::integer(-7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn reduced_after_arithmetic() {
        let x = r("1/6") + r("1/3");
        assert_eq!(x.numer(), &BigInt::from(1));
        assert_eq!(x.denom(), &BigInt::from(2));
        let y = r("-2/4") * r("3/-9");
        assert_eq!(y.to_string(), "1/6");
        assert!(y.denom() > &BigInt::zero());
    }

    #[test]
    fn serde_uses_fraction_strings() {
        let json = serde_json::to_string(&Rational::new(3, 9)).unwrap();
        assert_eq!(json, "\"1/3\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Rational::new(1, 3));
    }

    proptest::proptest! {
        #[test]
        fn norm_is_symmetric(p in -500i64..500, q in 1i64..200) {
            let t = Rational::new(p, q);
            let a = norm_of(&t);
            let b = norm_of(&(Rational::one() - &t));
            proptest::prop_assert_eq!(&a, &b);
            proptest::prop_assert!(!a.is_negative() && a <= Rational::half());
        }

        #[test]
        fn parse_display_roundtrip(p in -10_000i64..10_000, q in 1i64..10_000) {
            let x = Rational::new(p, q);
            proptest::prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
