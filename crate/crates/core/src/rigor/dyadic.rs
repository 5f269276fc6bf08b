//! Exact binary floating values `mantissa * 2^exponent` with directed rounding.
//!
//! Arithmetic on `Dyadic` is exact; precision is only lost through the
//! explicit `round` / `from_rational` calls, which always round in the
//! requested direction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Canonical form: the mantissa is odd, or the value is zero with exponent 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Self {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Keeps at most `bits` significant bits, rounding in `dir`.
    pub fn round(&self, bits: u32, dir: Round) -> Self {
        let len = self.mant.bits();
        if len <= u64::from(bits) {
            return self.clone();
        }
        let drop = len - u64::from(bits);
        let m = div_round(&self.mant, &pow2(drop), dir);
        Self::new(m, self.exp + drop as i64)
    }

    /// `num / den` rounded to `bits` significant bits.
    pub fn quotient(num: &BigInt, den: &BigInt, bits: u32, dir: Round) -> Self {
        assert!(!den.is_zero(), "dyadic quotient by zero");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        // Scale so the integer quotient carries at least bits + 1 bits.
        let shift = i64::from(bits) + 2 - (num.bits() as i64 - den.bits() as i64);
        let (n, d) = if shift >= 0 {
            (num << shift as u64, den)
        } else {
            (num, den << (-shift) as u64)
        };
        let q = div_round(&n, &d, dir);
        Self::new(q, -shift).round(bits, dir)
    }

    pub fn from_rational(q: &ExactRational, bits: u32, dir: Round) -> Self {
        Self::quotient(q.numer(), q.denom(), bits, dir)
    }

    /// Directed quotient of two dyadics.
    pub fn div(&self, other: &Self, bits: u32, dir: Round) -> Self {
        let e = self.exp - other.exp;
        let q = Self::quotient(&self.mant, &other.mant, bits, dir);
        q.shl(e)
    }

    pub fn to_rational(&self) -> ExactRational {
        let r = if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        };
        ExactRational::from(r)
    }

    /// `floor(x)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&pow2((-self.exp) as u64))
        }
    }

    pub fn cmp_rational(&self, q: &ExactRational) -> Ordering {
        self.to_rational().cmp(q)
    }

    /// Decimal string with at most `digits` significant digits, rounded in
    /// `dir` so that the printed value stays on the correct side.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational();
        let abs = q.abs();
        // Decimal exponent t with 10^t <= |q| < 10^(t+1).
        let mut t = ((self.magnitude().unwrap_or(0) as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let ten = ExactRational::from(10);
        let pow10 = |k: i64| ten.pow(k as i32).expect("nonzero base");
        while pow10(t) > abs {
            t -= 1;
        }
        while pow10(t + 1) <= abs {
            t += 1;
        }
        let scale = i64::from(digits) - 1 - t;
        let scaled = &q * &pow10(scale);
        let n = match dir {
            Round::Down => scaled.floor(),
            Round::Up => scaled.ceil(),
        };
        format_scaled(&n, scale)
    }
}

/// Renders `n * 10^(-scale)` without trailing zeros.
fn format_scaled(n: &BigInt, scale: i64) -> String {
    if n.is_zero() {
        return "0".to_string();
    }
    let negative = n.is_negative();
    let mut digits = n.abs().to_string();
    let mut scale = scale;
    while scale > 0 && digits.ends_with('0') {
        digits.pop();
        scale -= 1;
    }
    let sign = if negative { "-" } else { "" };
    let len = digits.len() as i64;
    // Position of the decimal point relative to the digit string.
    let point = len - scale;
    if scale <= 0 {
        if point > 24 {
            return format!("{sign}{}e{}", mantissa_form(&digits), point - 1);
        }
        let zeros = "0".repeat((-scale) as usize);
        return format!("{sign}{digits}{zeros}");
    }
    if point > 0 {
        let (int, frac) = digits.split_at(point as usize);
        format!("{sign}{int}.{frac}")
    } else if point > -6 {
        format!("{sign}0.{}{digits}", "0".repeat((-point) as usize))
    } else {
        format!("{sign}{}e{}", mantissa_form(&digits), point - 1)
    }
}

fn mantissa_form(digits: &str) -> String {
    let digits = digits.trim_end_matches('0');
    if digits.len() <= 1 {
        digits.to_string()
    } else {
        format!("{}.{}", &digits[..1], &digits[1..])
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => {
                let rank = |s: Sign| match s {
                    Sign::Minus => 0,
                    Sign::NoSign => 1,
                    Sign::Plus => 2,
                };
                rank(a).cmp(&rank(b))
            }
            _ => self.sub(other).sign().cmp_to_zero(),
        }
    }
}

trait SignOrd {
    fn cmp_to_zero(self) -> Ordering;
}

impl SignOrd for Sign {
    fn cmp_to_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(BigInt::zero(), 7), Dyadic::zero());
    }

    #[test]
    fn directed_rounding_brackets_value() {
        for s in ["1/3", "-1/3", "22/7", "-109/15", "1/1000000007"] {
            let r = q(s);
            let lo = Dyadic::from_rational(&r, 53, Round::Down);
            let hi = Dyadic::from_rational(&r, 53, Round::Up);
            assert!(lo.to_rational() <= r && r <= hi.to_rational(), "{s}");
            assert!(hi.mantissa().bits() <= 53 && lo.mantissa().bits() <= 53);
            let ulp = (&hi.to_rational() - &lo.to_rational()).abs();
            assert!(ulp <= &r.abs() * &q("1/4503599627370496"), "{s}");
        }
    }

    #[test]
    fn exact_values_are_not_widened() {
        let two = Dyadic::from_rational(&q("2"), 2, Round::Down);
        assert_eq!(two, Dyadic::from_int(2));
        let eighth = Dyadic::from_rational(&q("-3/8"), 64, Round::Up);
        assert_eq!(eighth.to_rational(), q("-3/8"));
    }

    #[test]
    fn ordering_matches_rationals() {
        let vals = ["-5/2", "-1/1024", "0", "3/1024", "1", "7/3"];
        let ds: Vec<Dyadic> = vals
            .iter()
            .map(|s| Dyadic::from_rational(&q(s), 80, Round::Down))
            .collect();
        for w in ds.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn directed_quotient() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div(&b, 30, Round::Down).to_rational();
        let hi = a.div(&b, 30, Round::Up).to_rational();
        assert!(lo < q("1/3") && q("1/3") < hi);
        let neg = Dyadic::from_int(-1).div(&b, 30, Round::Down).to_rational();
        assert!(neg < q("-1/3"));
    }

    #[test]
    fn decimal_rendering_respects_direction() {
        let third_lo = Dyadic::from_rational(&q("1/3"), 128, Round::Down);
        assert_eq!(third_lo.to_decimal(6, Round::Down), "0.333333");
        assert_eq!(third_lo.to_decimal(6, Round::Up), "0.333334");
        let neg = Dyadic::from_rational(&q("-2/3"), 128, Round::Down);
        assert_eq!(neg.to_decimal(4, Round::Down), "-0.6667");
        assert_eq!(neg.to_decimal(4, Round::Up), "-0.6666");
        assert_eq!(Dyadic::from_int(1000).to_decimal(3, Round::Down), "1000");
        assert_eq!(Dyadic::from_int(-12).to_decimal(5, Round::Up), "-12");
        let tiny = Dyadic::new(BigInt::from(1), -200);
        let s = tiny.to_decimal(5, Round::Down);
        assert_eq!(s, "6.223e-61");
        let back: ExactRational = s.parse().unwrap();
        assert!(back <= tiny.to_rational());
    }

    #[test]
    fn floor_of_negative_fraction() {
        let d = Dyadic::from_rational(&q("-5/4"), 10, Round::Down);
        assert_eq!(d.floor(), BigInt::from(-2));
        assert_eq!(Dyadic::from_int(7).floor(), BigInt::from(7));
    }
}
