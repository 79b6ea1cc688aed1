//! Arbitrary-precision rational scalars.
//!
//! Every value is kept in lowest terms with a positive denominator, so two
//! equal rationals are always bit-identical. Serialization is the string
//! `"p/q"` (plain `"p"` when the denominator is one) in every file format of
//! this crate; no floats anywhere.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` reduced to lowest terms.
    ///
    /// Panics if `den` is zero; a zero denominator is a programming error,
    /// not a data condition.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    /// Squared value; used for exact distance comparisons.
    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    /// Halves the value exactly.
    pub fn half(&self) -> Self {
        Rational(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }
}

/// Encoding length in bits under the convention: an integer `n` costs
/// `1 + ceil(log2(|n| + 1))` bits and a rational costs the sum of its
/// numerator and denominator lengths. Vectors and matrices sum entrywise.
pub trait EncodingLength {
    fn encoding_length(&self) -> usize;
}

/// `1 + ceil(log2(|n| + 1))`.
pub fn int_encoding_length(n: &BigInt) -> usize {
    let m: BigUint = (n.magnitude() + 1u32).clone();
    let bits = m.bits() as usize;
    // m >= 1, so bits >= 1; ceil(log2(m)) is bits-1 when m is a power of two.
    let ceil_log2 = if m.count_ones() == 1 { bits - 1 } else { bits };
    1 + ceil_log2
}

impl EncodingLength for Rational {
    fn encoding_length(&self) -> usize {
        int_encoding_length(self.numer()) + int_encoding_length(self.denom())
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

// Debug mirrors Display; the reduced fraction is the whole state.
impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for integer-valued rationals in tests and fixtures.
pub fn rat(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints_reduced() {
        let x: Rational = "6/4".parse().unwrap();
        assert_eq!(x, ratio(3, 2));
        assert_eq!(x.to_string(), "3/2");
        let y: Rational = "-10/5".parse().unwrap();
        assert_eq!(y.to_string(), "-2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn negative_denominator_normalizes() {
        let x = Rational::new(3, -6);
        assert_eq!(x.to_string(), "-1/2");
        assert!(x.denom().is_positive());
    }

    #[test]
    fn encoding_length_convention() {
        // 0 = 0/1: bits(0) + bits(1) = 1 + 2.
        assert_eq!(rat(0).encoding_length(), 3);
        // 1/2: bits(1) + bits(2) = 2 + 3.
        assert_eq!(ratio(1, 2).encoding_length(), 5);
        assert_eq!(int_encoding_length(&BigInt::from(0)), 1);
        assert_eq!(int_encoding_length(&BigInt::from(1)), 2);
        assert_eq!(int_encoding_length(&BigInt::from(3)), 3);
        assert_eq!(int_encoding_length(&BigInt::from(4)), 4);
        assert_eq!(int_encoding_length(&BigInt::from(-4)), 4);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i32>(), 1..10_000i32).prop_map(|(n, d)| Rational::new(n as i64, d as i64))
    }

    proptest! {
        #[test]
        fn add_sub_roundtrip(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!((&a + &b) - &b, a);
        }

        #[test]
        fn mul_div_roundtrip(a in arb_rational(), b in arb_rational()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b) / &b, a);
        }

        #[test]
        fn canonical_form_is_bitwise(n in any::<i32>(), d in 1..1000i32, k in 1..50i32) {
            let plain = Rational::new(n as i64, d as i64);
            let scaled = Rational::new(n as i64 * k as i64, d as i64 * k as i64);
            prop_assert_eq!(plain.numer(), scaled.numer());
            prop_assert_eq!(plain.denom(), scaled.denom());
        }

        #[test]
        fn serde_roundtrip(a in arb_rational()) {
            let json = serde_json::to_string(&a).unwrap();
            let back: Rational = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(a, back);
        }
    }
}
