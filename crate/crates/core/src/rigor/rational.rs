use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RigorError;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, RigorError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(RigorError::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
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
        Self(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Floor as a machine integer, for parameters that index supports.
    pub fn floor_i64(&self) -> Option<i64> {
        self.floor().to_i64()
    }

    pub fn recip(&self) -> Result<Self, RigorError> {
        if self.is_zero() {
            return Err(RigorError::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, RigorError> {
        if other.is_zero() {
            return Err(RigorError::DivisionByZero);
        }
        Ok(Self(&self.0 / &other.0))
    }

    /// Integer power; negative exponents invert (zero base rejected).
    pub fn pow(&self, exp: i32) -> Result<Self, RigorError> {
        if exp < 0 && self.is_zero() {
            return Err(RigorError::DivisionByZero);
        }
        Ok(Self(num_traits::Pow::pow(&self.0, exp)))
    }

    pub fn powu(&self, exp: u32) -> Self {
        Self(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn factorial(n: u64) -> Self {
        Self::from_integer(factorial(n))
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy conversion for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    BigInt::from_biguint(Sign::Plus, acc)
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `7`, `-3/2`, `0.25`, `1.5e-3` or `2E4` exactly. Decimal inputs are
/// converted digit by digit, never through binary floating point.
impl FromStr for ExactRational {
    type Err = RigorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RigorError::Parse(s.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n = parse_decimal(n.trim()).ok_or_else(bad)?;
            let d = parse_decimal(d.trim()).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(RigorError::DivisionByZero);
            }
            return Ok(Self(n / d));
        }
        parse_decimal(s).map(Self).ok_or_else(bad)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    if negative {
        value = -value;
    }
    let scale = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    let ten = BigRational::from_integer(BigInt::from(10));
    Some(BigRational::from_integer(value) * num_traits::Pow::pow(&ten, scale))
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactRational {
    fn from(q: BigRational) -> Self {
        Self(q)
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for ExactRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<i64> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: i64) -> ExactRational {
                ExactRational($trait::$method(
                    &self.0,
                    BigRational::from_integer(BigInt::from(rhs)),
                ))
            }
        }
        impl $trait<i64> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: i64) -> ExactRational {
                ExactRational($trait::$method(
                    self.0,
                    BigRational::from_integer(BigInt::from(rhs)),
                ))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division panics on a zero divisor like the underlying BigRational; use
// `checked_div` where the divisor is data-dependent.
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(q("3/2"), ExactRational::new(3, 2).unwrap());
        assert_eq!(q("0.25"), ExactRational::new(1, 4).unwrap());
        assert_eq!(q("-1.5e-3"), ExactRational::new(-3, 2000).unwrap());
        assert_eq!(q("2E2"), ExactRational::from(200));
        assert_eq!(q(".5"), ExactRational::new(1, 2).unwrap());
        assert_eq!(q("6/4"), q("3/2"));
        assert_eq!(q("0.1/0.3"), q("1/3"));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "1e", "/"] {
            assert!(s.parse::<ExactRational>().is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn floor_and_ceil_of_negatives() {
        assert_eq!(q("-3/2").floor(), BigInt::from(-2));
        assert_eq!(q("-3/2").ceil(), BigInt::from(-1));
        assert_eq!(q("7/3").floor(), BigInt::from(2));
        assert_eq!(q("4").ceil(), BigInt::from(4));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(20), BigInt::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn display_round_trips() {
        for s in ["109/15", "-7", "0", "1/3"] {
            assert_eq!(q(s).to_string(), s);
            assert_eq!(q(&q(s).to_string()), q(s));
        }
    }

    fn arb_rational() -> impl Strategy<Value = ExactRational> {
        (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| ExactRational::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn field_operations_invert(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&(&a * &b) - &(&b * &a), ExactRational::zero());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
                prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a);
            }
        }

        #[test]
        fn normalized(a in arb_rational()) {
            let g = a.numer().abs().gcd(a.denom());
            prop_assert!(a.denom().is_positive());
            prop_assert!(a.is_zero() || g.is_one());
        }
    }
}
