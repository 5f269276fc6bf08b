use std::fmt;

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Round};
use super::{ExactRational, RigorError};

/// A closed interval `[lo, hi]` with dyadic endpoints that is guaranteed to
/// contain the real quantity it stands for.
///
/// Every binary operation rounds its result outward to the larger of the
/// operands' `bits`, so enclosures computed from exact inputs only lose
/// width through directed rounding.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Inconclusive,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self, RigorError> {
        if bits < 2 {
            return Err(RigorError::InvalidPrecision(bits));
        }
        if lo > hi {
            return Err(RigorError::InvertedBounds);
        }
        Ok(Self { lo, hi, bits })
    }

    fn raw(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure {lo:?} > {hi:?}");
        Self {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    pub fn point(value: Dyadic, bits: u32) -> Self {
        Self::raw(value.clone(), value, bits)
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Self::point(Dyadic::from_int(n), bits)
    }

    pub fn zero(bits: u32) -> Self {
        Self::from_int(0, bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::from_int(1, bits)
    }

    /// Outward-rounded enclosure of an exact rational.
    pub fn from_rational(q: &ExactRational, bits: u32) -> Result<Self, RigorError> {
        if bits < 2 {
            return Err(RigorError::InvalidPrecision(bits));
        }
        Ok(Self {
            lo: Dyadic::from_rational(q, bits, Round::Down),
            hi: Dyadic::from_rational(q, bits, Round::Up),
            bits,
        })
    }

    /// Enclosure spanning two rationals `lo <= hi`.
    pub fn from_rational_bounds(
        lo: &ExactRational,
        hi: &ExactRational,
        bits: u32,
    ) -> Result<Self, RigorError> {
        if lo > hi {
            return Err(RigorError::InvertedBounds);
        }
        Ok(Self::from_rational(lo, bits)?.hull(&Self::from_rational(hi, bits)?))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Same interval, subsequent operations rounded at `bits`.
    pub fn with_bits(&self, bits: u32) -> Self {
        Self::raw(self.lo.clone(), self.hi.clone(), bits)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn width_rational(&self) -> ExactRational {
        self.width().to_rational()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, q: &ExactRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `other` lies inside `self`.
    pub fn contains(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    /// Intersection of two enclosures of the same quantity.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Self {
            lo,
            hi,
            bits: self.bits.max(other.bits),
        })
    }

    /// Enclosure of `max(x, y)` over all `x in self`, `y in other`.
    pub fn max(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.bits.max(other.bits),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::raw(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.bits.max(other.bits),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let corners = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = corners.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = corners.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Self::raw(lo, hi, self.bits.max(other.bits))
    }

    pub fn div(&self, other: &Self) -> Result<Self, RigorError> {
        if other.contains_zero() {
            return Err(RigorError::DivisionByZero);
        }
        let bits = self.bits.max(other.bits);
        let corners = |dir: Round| {
            [
                self.lo.div(&other.lo, bits, dir),
                self.lo.div(&other.hi, bits, dir),
                self.hi.div(&other.lo, bits, dir),
                self.hi.div(&other.hi, bits, dir),
            ]
        };
        let lo = corners(Round::Down).into_iter().min().unwrap_or_else(Dyadic::zero);
        let hi = corners(Round::Up).into_iter().max().unwrap_or_else(Dyadic::zero);
        Ok(Self::raw(lo, hi, bits))
    }

    pub fn recip(&self) -> Result<Self, RigorError> {
        Self::one(self.bits).div(self)
    }

    pub fn add_rational(&self, q: &ExactRational) -> Self {
        self.add(&Self::from_rational(q, self.bits).expect("bits >= 2"))
    }

    pub fn mul_rational(&self, q: &ExactRational) -> Self {
        self.mul(&Self::from_rational(q, self.bits).expect("bits >= 2"))
    }

    pub fn div_rational(&self, q: &ExactRational) -> Result<Self, RigorError> {
        self.div(&Self::from_rational(q, self.bits)?)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(n, self.bits))
    }

    /// Tight integer power (even powers of intervals straddling zero start at 0).
    pub fn powu(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.bits);
        }
        let p = |d: &Dyadic, dir: Round| {
            let mut acc = Dyadic::one();
            for _ in 0..n {
                acc = acc.mul(d).round(self.bits + 64, dir);
            }
            acc
        };
        // Powers of negative endpoints flip the rounding direction for odd n;
        // work on magnitudes and restore the sign afterwards.
        let pow_signed = |d: &Dyadic, dir: Round| {
            if d.is_negative() && n % 2 == 1 {
                let flipped = match dir {
                    Round::Down => Round::Up,
                    Round::Up => Round::Down,
                };
                p(&d.abs(), flipped).neg()
            } else {
                p(&d.abs(), dir)
            }
        };
        if n % 2 == 1 || !self.lo.is_negative() {
            Self::raw(pow_signed(&self.lo, Round::Down), pow_signed(&self.hi, Round::Up), self.bits)
        } else if !self.hi.is_positive() {
            Self::raw(pow_signed(&self.hi, Round::Down), pow_signed(&self.lo, Round::Up), self.bits)
        } else {
            let top = p(&self.lo.abs(), Round::Up).max(p(&self.hi.abs(), Round::Up));
            Self::raw(Dyadic::zero(), top, self.bits)
        }
    }

    /// `|x|` bound: the largest magnitude of any point in the enclosure.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Symmetric enclosure `[-r, r]`.
    pub fn symmetric(radius: &Dyadic, bits: u32) -> Self {
        let r = radius.abs();
        Self::raw(r.neg(), r, bits)
    }

    pub fn sign(&self) -> Sign {
        certify_sign(self)
    }

    /// Integer `k` with `k <= x < k + 1` for every `x` in the enclosure, or the
    /// integer boundary it straddles.
    pub fn floor_cell(&self) -> Result<BigInt, BigInt> {
        let a = self.lo.floor();
        let b = self.hi.floor();
        if a == b {
            Ok(a)
        } else {
            Err(b)
        }
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    pub fn lo_decimal(&self, digits: u32) -> String {
        self.lo.to_decimal(digits, Round::Down)
    }

    pub fn hi_decimal(&self, digits: u32) -> String {
        self.hi.to_decimal(digits, Round::Up)
    }

    /// Number of significant decimal digits that the working precision supports.
    pub fn decimal_digits(&self) -> u32 {
        ((f64::from(self.bits) * std::f64::consts::LOG10_2).ceil() as u32).max(1) + 1
    }

    /// Decimal endpoint strings at the precision's natural digit count.
    pub fn decimal_bounds(&self) -> (String, String) {
        let d = self.decimal_digits();
        (self.lo_decimal(d), self.hi_decimal(d))
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_rational().to_f64()
    }
}

/// Sign of every point of the enclosure, when it is provable.
pub fn certify_sign(x: &Enclosure) -> Sign {
    if x.lo.is_positive() {
        Sign::Positive
    } else if x.hi.is_negative() {
        Sign::Negative
    } else {
        Sign::Inconclusive
    }
}

pub fn rational_to_enclosure(q: &ExactRational, bits: u32) -> Result<Enclosure, RigorError> {
    Enclosure::from_rational(q, bits)
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]@{}",
            self.lo.to_decimal(25, Round::Down),
            self.hi.to_decimal(25, Round::Up),
            self.bits
        )
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.decimal_bounds();
        write!(f, "[{lo}, {hi}]")
    }
}
