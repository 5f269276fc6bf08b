//! Rigorous `exp` and `ln`.
//!
//! Both are evaluated in interval arithmetic at a widened working precision
//! and closed off with an explicit series remainder interval, then rounded
//! outward to the caller's precision.
//!
//! - `exp(d)`: argument halved `s` times until `|r| <= 2^-10`, Taylor series
//!   with tail `|R_n| <= 2 |r|^(n+1) / (n+1)!`, then squared `s` times.
//! - `ln(d)`: `d = y * 2^e` with `y in (1/sqrt2, sqrt2]`, `ln y = 2 atanh z`
//!   for `z = (y-1)/(y+1)`, tail `<= 2 |z|^(2n+3) / (2n+3)`, plus `e ln 2`
//!   where `ln 2 = 2 atanh(1/3)`.

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Round};
use super::{Enclosure, ExactRational, RigorError};

/// Arguments beyond `2^20` in magnitude are outside the supported range.
const MAX_EXP_MAGNITUDE: i64 = 20;
const GUARD_BITS: u32 = 24;

fn exp_point(d: &Dyadic, bits: u32) -> Result<Enclosure, RigorError> {
    if d.is_zero() {
        return Ok(Enclosure::one(bits));
    }
    let mag = d.magnitude().unwrap_or(0);
    if mag >= MAX_EXP_MAGNITUDE {
        return Err(RigorError::Range(format!(
            "exp argument {} exceeds 2^{MAX_EXP_MAGNITUDE}",
            d.to_decimal(12, Round::Down)
        )));
    }
    let halvings = (mag + 11).max(0) as u32;
    let wp = bits + halvings + GUARD_BITS;
    let r = Enclosure::point(d.shl(-i64::from(halvings)), wp);
    let r_mag = r.mag();

    let mut sum = Enclosure::one(wp);
    let mut term = Enclosure::one(wp);
    let eps = Dyadic::new(BigInt::from(1), -i64::from(wp) - 4);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r).div(&Enclosure::from_int(k, wp))?;
        sum = sum.add(&term);
        // Upper bound of the next term; the tail is at most twice that.
        let next = term.mag().mul(&r_mag).div(&Dyadic::from_int(k + 1), wp, Round::Up);
        if next < eps {
            let tail = next.shl(1);
            sum = sum.add(&Enclosure::symmetric(&tail, wp));
            break;
        }
        k += 1;
    }
    for _ in 0..halvings {
        sum = sum.powu(2);
    }
    Ok(sum.with_bits(bits))
}

/// Enclosure of `e^t` for every `t` in `x`, at `x`'s precision.
pub fn exp_enclosure(x: &Enclosure) -> Result<Enclosure, RigorError> {
    let bits = x.bits();
    if x.is_point() {
        return exp_point(x.lo(), bits);
    }
    let lo = exp_point(x.lo(), bits)?;
    let hi = exp_point(x.hi(), bits)?;
    Enclosure::new(lo.lo().clone(), hi.hi().clone(), bits)
}

pub fn exp_rational(q: &ExactRational, bits: u32) -> Result<Enclosure, RigorError> {
    exp_enclosure(&Enclosure::from_rational(q, bits)?)
}

/// `sum_{k>=0} z^(2k+1)/(2k+1)` with its remainder, for `|z| <= 1/2`.
fn atanh_series(z: &Enclosure, wp: u32) -> Result<Enclosure, RigorError> {
    let z2 = z.powu(2);
    let z_mag = z.mag();
    let z2_mag = z2.mag();
    let eps = Dyadic::new(BigInt::from(1), -i64::from(wp) - 4);
    let mut power = z.with_bits(wp);
    let mut sum = power.clone();
    let mut power_mag = z_mag;
    let mut k: i64 = 1;
    loop {
        power = power.mul(&z2);
        power_mag = power_mag.mul(&z2_mag).round(wp, Round::Up);
        let next = power_mag.div(&Dyadic::from_int(2 * k + 1), wp, Round::Up);
        if next < eps {
            // Geometric tail with ratio z^2 <= 1/4.
            let tail = next.shl(1);
            sum = sum.add(&Enclosure::symmetric(&tail, wp));
            break;
        }
        sum = sum.add(&power.div(&Enclosure::from_int(2 * k + 1, wp))?);
        k += 1;
    }
    Ok(sum)
}

pub fn ln2_enclosure(bits: u32) -> Result<Enclosure, RigorError> {
    let wp = bits + GUARD_BITS;
    let z = Enclosure::from_rational(&ExactRational::new(1, 3)?, wp)?;
    Ok(atanh_series(&z, wp)?.mul_int(2).with_bits(bits))
}

fn ln_point(d: &Dyadic, bits: u32) -> Result<Enclosure, RigorError> {
    if !d.is_positive() {
        return Err(RigorError::Domain(format!(
            "ln of nonpositive value {}",
            d.to_decimal(12, Round::Down)
        )));
    }
    if *d == Dyadic::one() {
        return Ok(Enclosure::zero(bits));
    }
    let mut e = d.magnitude().unwrap_or(0);
    let mut y = d.shl(-e);
    // y in [1, 2); move to (1/sqrt2, sqrt2] so |z| <= 0.172.
    if y.mul(&y) > Dyadic::from_int(2) {
        e += 1;
        y = y.shl(-1);
    }
    let e_bits = 64 - e.unsigned_abs().leading_zeros();
    let wp = bits + e_bits + GUARD_BITS;
    let y = Enclosure::point(y, wp);
    let one = Enclosure::one(wp);
    let z = y.sub(&one).div(&y.add(&one))?;
    let mut result = atanh_series(&z, wp)?.mul_int(2);
    if e != 0 {
        result = result.add(&ln2_enclosure(wp)?.mul_int(e));
    }
    Ok(result.with_bits(bits))
}

/// Enclosure of `ln t` for every `t` in `x`; requires `x.lo > 0`.
pub fn ln_enclosure(x: &Enclosure) -> Result<Enclosure, RigorError> {
    let bits = x.bits();
    if !x.lo().is_positive() {
        return Err(RigorError::Domain(format!(
            "ln requires a positive lower bound, got {}",
            x.lo().to_decimal(12, Round::Down)
        )));
    }
    if x.is_point() {
        return ln_point(x.lo(), bits);
    }
    let lo = ln_point(x.lo(), bits)?;
    let hi = ln_point(x.hi(), bits)?;
    Enclosure::new(lo.lo().clone(), hi.hi().clone(), bits)
}

pub fn ln_rational(q: &ExactRational, bits: u32) -> Result<Enclosure, RigorError> {
    ln_enclosure(&Enclosure::from_rational(q, bits)?)
}
