//! Mode comparisons for the zero-truncated Poisson and binomial families.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::verdict::{escalate, BoundName, BoundReport, CertVerdict, Evaluation};
use super::{param, precondition, IneqError};
use crate::rigor::{exp_enclosure, exp_rational, ln_rational, Enclosure, ExactRational, PrecisionPolicy};

fn floor_u32(q: &ExactRational) -> Result<u32, IneqError> {
    q.floor()
        .to_u32()
        .ok_or_else(|| IneqError::Precondition(format!("parameter {q} too large")))
}

/// `x^j e^-x / j!` for `x` in the enclosure.
fn poisson_atom(x: &Enclosure, j: u32) -> Result<Enclosure, IneqError> {
    Ok(x.powu(j)
        .mul(&exp_enclosure(&x.neg())?)
        .div_rational(&ExactRational::factorial(u64::from(j)))?)
}

/// Strict `P{X = mode} > P{Z = floor(lambda')}` for `X ~ ZTP(lambda)` and
/// `Z ~ Poisson(lambda')`, `lambda' = E[X] = lambda e^lambda / (e^lambda - 1)`.
pub fn ztp_strict_check(lambda: &ExactRational, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    if !lambda.is_positive() {
        return precondition(format!("lambda must be positive, got {lambda}"));
    }
    // The ZTP mode is floor(lambda), or 1 below lambda = 1.
    let k = floor_u32(lambda)?.max(1);
    let shape = &lambda.powu(k) / &ExactRational::factorial(u64::from(k));
    let ((lhs, rhs, mean), verdict) = escalate(policy, true, |bits| {
        let e = exp_rational(lambda, bits)?;
        let em1 = e.sub(&Enclosure::one(bits));
        let lhs = Enclosure::from_rational(&shape, bits)?.div(&em1)?;
        let mean = e.mul_rational(lambda).div(&em1)?;
        let (rhs, straddle) = match mean.floor_cell() {
            Ok(j) => (poisson_atom(&mean, big_to_u32(&j)?)?, None),
            Err(b) => {
                // Both candidate floors, so the gap still encloses the truth.
                let j = big_to_u32(&b)?;
                let hull = poisson_atom(&mean, j - 1)?.hull(&poisson_atom(&mean, j)?);
                (hull, Some(b))
            }
        };
        Ok(Evaluation {
            gap: lhs.sub(&rhs),
            data: (lhs, rhs, mean),
            floor_straddle: straddle,
        })
    })?;
    let mut notes = vec![format!("mode of X is {k}")];
    match mean.floor_cell() {
        Ok(j) => notes.push(format!("mode of Z is floor(lambda') = {j}")),
        Err(b) => notes.push(format!("lambda' enclosure straddles {b}")),
    }
    let (lo, hi) = mean.decimal_bounds();
    notes.push(format!("lambda' in [{lo}, {hi}]"));
    Ok(BoundReport {
        name: BoundName::ZtpStrict,
        point: vec![param("lambda", lambda)],
        lhs,
        rhs,
        verdict,
        notes,
    })
}

fn big_to_u32(b: &BigInt) -> Result<u32, IneqError> {
    b.to_u32()
        .ok_or_else(|| IneqError::Precondition(format!("floor {b} out of range")))
}

/// Exact factor `floor(x)! / x^floor(x)` of `f(x) = e^x floor(x)! / x^floor(x)`.
fn f_factor(x: &ExactRational) -> Result<ExactRational, IneqError> {
    let n = floor_u32(x)?;
    Ok(&ExactRational::factorial(u64::from(n)) / &x.powu(n))
}

fn f_ztp(x: &ExactRational, bits: u32) -> Result<Enclosure, IneqError> {
    Ok(exp_rational(x, bits)?.mul_rational(&f_factor(x)?))
}

/// Certifies `f(x_i) < f(x_{i+1})` for consecutive grid points, then the
/// exact agreement of both closed forms of `f(n)` at each integer `n >= 2`
/// inside the grid. Repeated grid points give a zero gap.
pub fn ztp_f_increasing_check(
    grid: &[ExactRational],
    policy: &PrecisionPolicy,
) -> Result<Vec<BoundReport>, IneqError> {
    if grid.iter().any(|x| *x < 1) {
        return precondition("grid points must be at least 1");
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return precondition("grid must be sorted");
    }
    let mut reports = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let ((lhs, rhs), verdict) = if a == b {
            let bits = policy.initial_bits;
            let v = f_ztp(a, bits)?;
            let verdict = CertVerdict::from_gap(Enclosure::zero(bits), true, bits);
            ((v.clone(), v), verdict)
        } else {
            escalate(policy, true, |bits| {
                let hi = f_ztp(b, bits)?;
                let lo = f_ztp(a, bits)?;
                Ok(Evaluation::new(hi.sub(&lo), (hi, lo)))
            })?
        };
        reports.push(BoundReport {
            name: BoundName::FZtp,
            point: vec![param("x_lo", a), param("x_hi", b)],
            lhs,
            rhs,
            verdict,
            notes: vec!["lhs = f(x_hi), rhs = f(x_lo)".into()],
        });
    }
    if let (Some(first), Some(last)) = (grid.first(), grid.last()) {
        let bits = policy.initial_bits;
        let from = first.ceil().to_u64().unwrap_or(2).max(2);
        let to = last.floor().to_u64().unwrap_or(0);
        for n in from..=to {
            let nq = ExactRational::from_integer(n);
            let left = &ExactRational::factorial(n - 1) / &nq.powu(n as u32 - 1);
            let right = &ExactRational::factorial(n) / &nq.powu(n as u32);
            let en = exp_rational(&nq, bits)?;
            let diff = &left - &right;
            let gap = Enclosure::from_rational(&diff, bits)?;
            let mut verdict = CertVerdict::from_gap(gap, false, bits);
            if !diff.is_zero() {
                verdict.status = super::Status::Refuted;
            }
            reports.push(BoundReport {
                name: BoundName::FZtp,
                point: vec![param("junction", n)],
                lhs: en.mul_rational(&left),
                rhs: en.mul_rational(&right),
                verdict,
                notes: vec![format!(
                    "(n-1)!/n^(n-1) = {left}, n!/n^n = {right}, exact equality {}",
                    diff.is_zero()
                )],
            });
        }
    }
    Ok(reports)
}

/// Strict `m!/(m-k)! (1-p)^(m-k) > e^(-mp) m^k` on `k/m <= p < (k+1)/(m+1)`.
pub fn binomial_case_check(
    m: u64,
    k: u64,
    p: &ExactRational,
    policy: &PrecisionPolicy,
) -> Result<BoundReport, IneqError> {
    if k < 1 || m < k + 1 {
        return precondition(format!("need m >= k + 1 >= 2, got m = {m}, k = {k}"));
    }
    let lo = ExactRational::new(k as i64, m as i64)?;
    let hi = ExactRational::new(k as i64 + 1, m as i64 + 1)?;
    if *p < lo || *p >= hi {
        return precondition(format!("p = {p} outside [{lo}, {hi})"));
    }
    let falling = &ExactRational::factorial(m) / &ExactRational::factorial(m - k);
    let lhs_exact = &falling * &(ExactRational::one() - p).powu((m - k) as u32);
    let mk = ExactRational::from_integer(m).powu(k as u32);
    let mp = p * &ExactRational::from_integer(m);
    let ((lhs, rhs), verdict) = escalate(policy, true, |bits| {
        let lhs = Enclosure::from_rational(&lhs_exact, bits)?;
        let rhs = exp_rational(&-&mp, bits)?.mul_rational(&mk);
        Ok(Evaluation::new(lhs.sub(&rhs), (lhs, rhs)))
    })?;
    Ok(BoundReport {
        name: BoundName::BinomialCase,
        point: vec![param("m", m), param("k", k), param("p", p)],
        lhs,
        rhs,
        verdict,
        notes: vec![format!("lhs = {lhs_exact} exactly")],
    })
}

/// Strict `f_m(p) = (m-1) ln(1-p) + m p > 0` on `1/m <= p < 2/(m+1)`.
pub fn binomial_fm_check(m: u64, p: &ExactRational, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    if m < 2 {
        return precondition(format!("need m >= 2, got {m}"));
    }
    let lo = ExactRational::new(1, m as i64)?;
    let hi = ExactRational::new(2, m as i64 + 1)?;
    if *p < lo || *p >= hi {
        return precondition(format!("p = {p} outside [{lo}, {hi})"));
    }
    let mp = p * &ExactRational::from_integer(m);
    let q = ExactRational::one() - p;
    let (lhs, verdict) = escalate(policy, true, |bits| {
        let lhs = ln_rational(&q, bits)?.mul_int(m as i64 - 1).add_rational(&mp);
        Ok(Evaluation::new(lhs.clone(), lhs))
    })?;
    let bits = verdict.precision_used;
    Ok(BoundReport {
        name: BoundName::FM,
        point: vec![param("m", m), param("p", p)],
        lhs,
        rhs: Enclosure::zero(bits),
        verdict,
        notes: Vec::new(),
    })
}
