//! The chain of bounds behind the ultra log-affine counterexample.
//!
//! With `S_M = sum_{n<=M} lambda^n / n!` and `t = lambda^N / (e^lambda N!)`:
//!
//! - Fact I: `S_{N-1} >= e^lambda - (lambda^N / N!) (N+1)/(N+1-lambda)`.
//! - Fact II: `exp(-lambda S_{N-1}/S_N) > e^-lambda (1 + lambda t)`.
//! - two-point: `exp(-lambda S_{N-1}/S_N) S_{N-1} > 1`, and the two facts give
//!   `LHS - 1 > t h(lambda, N) / (N+1-lambda)`.
//! - `h(lambda, N) = (N+1)(lambda-1) - lambda^2 - lambda^(N+1)(N+1)/(e^lambda N!)`.

use super::verdict::{escalate, BoundName, BoundReport, CertVerdict, Evaluation, InconclusiveReason};
use super::{param, precondition, IneqError};
use crate::dist::poisson_shape;
use crate::rigor::{exp_enclosure, exp_rational, Enclosure, ExactRational, PrecisionPolicy};

fn partial_sum(lambda: &ExactRational, last: u64) -> ExactRational {
    poisson_shape(lambda, 0, last).iter().sum()
}

fn check_lambda_n(lambda: &ExactRational, n: u64) -> Result<(), IneqError> {
    if !lambda.is_positive() {
        return precondition(format!("lambda must be positive, got {lambda}"));
    }
    if n < 1 {
        return precondition("N must be at least 1");
    }
    Ok(())
}

fn int(n: u64) -> ExactRational {
    ExactRational::from_integer(n)
}

fn point(lambda: &ExactRational, n: u64) -> Vec<(String, String)> {
    vec![param("lambda", lambda), param("N", n)]
}

fn in_window(lambda: &ExactRational, n: u64) -> bool {
    let lo: ExactRational = ExactRational::new(3, 2).expect("nonzero denominator");
    *lambda >= lo && *lambda <= 2 && n >= 5
}

fn window_note(lambda: &ExactRational, n: u64) -> String {
    if in_window(lambda, n) {
        "inside the proven region 3/2 <= lambda <= 2, N >= 5".into()
    } else {
        "outside the proven region 3/2 <= lambda <= 2, N >= 5".into()
    }
}

/// Strict form of Fact I; requires `lambda < N + 1`.
pub fn fact1_lower_bound(lambda: &ExactRational, n: u64, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    check_lambda_n(lambda, n)?;
    if *lambda >= int(n + 1) {
        return precondition(format!("need lambda < N + 1, got lambda = {lambda}, N = {n}"));
    }
    let lhs_exact = partial_sum(lambda, n - 1);
    let tail_bound = &(&lambda.powu(n as u32) / &ExactRational::factorial(n))
        * &(&int(n + 1) / &(&int(n + 1) - lambda));
    let ((lhs, rhs), verdict) = escalate(policy, true, |bits| {
        let lhs = Enclosure::from_rational(&lhs_exact, bits)?;
        let rhs = exp_rational(lambda, bits)?.add_rational(&-&tail_bound);
        Ok(Evaluation::new(lhs.sub(&rhs), (lhs, rhs)))
    })?;
    Ok(BoundReport {
        name: BoundName::FactI,
        point: point(lambda, n),
        lhs,
        rhs,
        verdict,
        notes: vec![
            format!("lhs = {lhs_exact} exactly"),
            format!("rhs = e^lambda - {tail_bound}"),
        ],
    })
}

/// Strict form of Fact II.
pub fn fact2_lower_bound(lambda: &ExactRational, n: u64, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    check_lambda_n(lambda, n)?;
    let exponent = -&(&(lambda * &partial_sum(lambda, n - 1)) / &partial_sum(lambda, n));
    let coeff = &lambda.powu(n as u32 + 1) / &ExactRational::factorial(n);
    let ((lhs, rhs), verdict) = escalate(policy, true, |bits| {
        let lhs = exp_rational(&exponent, bits)?;
        let decay = exp_rational(&-lambda, bits)?;
        let rhs = decay.mul(&decay.mul_rational(&coeff).add_rational(&ExactRational::one()));
        Ok(Evaluation::new(lhs.sub(&rhs), (lhs, rhs)))
    })?;
    Ok(BoundReport {
        name: BoundName::FactII,
        point: point(lambda, n),
        lhs,
        rhs,
        verdict,
        notes: vec![format!("lhs exponent = {exponent}")],
    })
}

/// Strict `exp(-lambda S_{N-1}/S_N) S_{N-1} > 1`. Points outside the proven
/// region are evaluated as well and flagged in the notes.
pub fn two_point_inequality(
    lambda: &ExactRational,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<BoundReport, IneqError> {
    check_lambda_n(lambda, n)?;
    let s_prev = partial_sum(lambda, n - 1);
    let exponent = -&(&(lambda * &s_prev) / &partial_sum(lambda, n));
    let (lhs, verdict) = escalate(policy, true, |bits| {
        let lhs = exp_rational(&exponent, bits)?.mul_rational(&s_prev);
        Ok(Evaluation::new(lhs.add_rational(&-&ExactRational::one()), lhs))
    })?;
    let bits = verdict.precision_used;
    Ok(BoundReport {
        name: BoundName::TwoPoint,
        point: point(lambda, n),
        lhs,
        rhs: Enclosure::one(bits),
        verdict,
        notes: vec![window_note(lambda, n)],
    })
}

/// Interval extension of `h(lambda, N)` over the enclosure.
pub fn h_function(lambda: &Enclosure, n: u64) -> Result<Enclosure, IneqError> {
    if n < 1 {
        return precondition("N must be at least 1");
    }
    let bits = lambda.bits();
    let linear = lambda.add(&Enclosure::from_int(-1, bits)).mul_int(n as i64 + 1);
    let coeff = &int(n + 1) / &ExactRational::factorial(n);
    let last = lambda
        .powu(n as u32 + 1)
        .mul_rational(&coeff)
        .mul(&exp_enclosure(&lambda.neg())?);
    Ok(linear.sub(&lambda.powu(2)).sub(&last))
}

/// `t h(lambda, N) / (N+1-lambda)`, a lower bound for `two-point LHS - 1`.
pub fn two_point_chain_bound(lambda: &ExactRational, n: u64, bits: u32) -> Result<Enclosure, IneqError> {
    check_lambda_n(lambda, n)?;
    if *lambda >= int(n + 1) {
        return precondition(format!("need lambda < N + 1, got lambda = {lambda}, N = {n}"));
    }
    let coeff = &(&lambda.powu(n as u32) / &ExactRational::factorial(n)) / &(&int(n + 1) - lambda);
    let l = Enclosure::from_rational(lambda, bits)?;
    Ok(exp_rational(&-lambda, bits)?
        .mul_rational(&coeff)
        .mul(&h_function(&l, n)?))
}

/// `e^-lambda lambda^(N+1)/(N+1)! ((N+1)^2 - lambda(N+2)) + lambda - 1`.
fn claim1_step(lambda: &Enclosure, n: u64) -> Result<Enclosure, IneqError> {
    let bits = lambda.bits();
    let inner = lambda
        .mul_int(-(n as i64 + 2))
        .add(&Enclosure::from_int(((n + 1) * (n + 1)) as i64, bits));
    let front = exp_enclosure(&lambda.neg())?
        .mul(&lambda.powu(n as u32 + 1))
        .div_rational(&ExactRational::factorial(n + 1))?;
    Ok(front.mul(&inner).add(lambda).add(&Enclosure::from_int(-1, bits)))
}

fn claim1_report(
    lambda_point: Vec<(String, String)>,
    n: u64,
    policy: &PrecisionPolicy,
    lambda_at: impl Fn(u32) -> Result<Enclosure, IneqError>,
    mut notes: Vec<String>,
) -> Result<BoundReport, IneqError> {
    if n < 1 {
        return precondition("N must be at least 1");
    }
    let (lhs, verdict) = escalate(policy, true, |bits| {
        let step = claim1_step(&lambda_at(bits)?, n)?;
        Ok(Evaluation::new(step.clone(), step))
    })?;
    let bits = verdict.precision_used;
    let mut point = lambda_point;
    point.push(param("N", n));
    notes.insert(0, "lhs = h(lambda, N+1) - h(lambda, N)".into());
    Ok(BoundReport {
        name: BoundName::ClaimIStep,
        point,
        lhs,
        rhs: Enclosure::zero(bits),
        verdict,
        notes,
    })
}

/// Strict positivity of the step `h(lambda, N+1) - h(lambda, N)`. The notes
/// check the factorization `(N+1)^2 - lambda(N+2) = (N+2)(N - lambda + 1/(N+2))`
/// exactly, together with the sign of the second factor.
pub fn claim1_step_check(lambda: &ExactRational, n: u64, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    check_lambda_n(lambda, n)?;
    let lhs = &int((n + 1) * (n + 1)) - &(lambda * &int(n + 2));
    let factor = &(&int(n) - lambda) + &int(n + 2).recip()?;
    let rhs = &int(n + 2) * &factor;
    let notes = vec![
        format!("factorization exact: {}", lhs == rhs),
        format!("N - lambda + 1/(N+2) = {factor} > 0: {}", factor.is_positive()),
    ];
    claim1_report(
        vec![param("lambda", lambda)],
        n,
        policy,
        |bits| Ok(Enclosure::from_rational(lambda, bits)?),
        notes,
    )
}

/// Step positivity over every `lambda` in `[lo, hi]` at once.
pub fn claim1_step_window_check(
    lo: &ExactRational,
    hi: &ExactRational,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<BoundReport, IneqError> {
    if !lo.is_positive() || lo > hi {
        return precondition(format!("invalid window [{lo}, {hi}]"));
    }
    claim1_report(
        vec![param("lambda_lo", lo), param("lambda_hi", hi)],
        n,
        policy,
        |bits| Ok(Enclosure::from_rational_bounds(lo, hi, bits)?),
        Vec::new(),
    )
}

/// Step formula minus `h(lambda, N+1) - h(lambda, N)` evaluated directly;
/// encloses zero.
pub fn claim1_identity_gap(lambda: &ExactRational, n: u64, bits: u32) -> Result<Enclosure, IneqError> {
    check_lambda_n(lambda, n)?;
    let l = Enclosure::from_rational(lambda, bits)?;
    let direct = h_function(&l, n + 1)?.sub(&h_function(&l, n)?);
    Ok(claim1_step(&l, n)?.sub(&direct))
}

fn h1(x: &ExactRational) -> ExactRational {
    &(&(x * &int(6)) - &x.powu(2)) - &int(6)
}

/// `-(1/20) e^-x x^6`.
fn h2(x: &Enclosure) -> Result<Enclosure, IneqError> {
    Ok(exp_enclosure(&x.neg())?
        .mul(&x.powu(6))
        .div_rational(&int(20))?
        .neg())
}

/// Strict `h(lambda, 5) > 0` on the window, via `h(., 5) = h1 + h2` with `h1`
/// increasing and `h2` decreasing there, so `h >= h1(lo) + h2(hi)`. Both
/// monotonicity claims are certified from derivative enclosures.
pub fn claim2_check(lo: &ExactRational, hi: &ExactRational, policy: &PrecisionPolicy) -> Result<BoundReport, IneqError> {
    let three_halves = ExactRational::new(3, 2)?;
    if *lo < three_halves || *hi > 2 || lo > hi {
        return precondition(format!("window [{lo}, {hi}] not contained in [3/2, 2]"));
    }
    // h1' = 6 - 2x, exact over the window.
    let h1_slope_min = &int(6) - &(hi * &int(2));
    let h1_lo = h1(lo);
    let ((lhs, h2_slope), mut verdict) = escalate(policy, true, |bits| {
        let bound = Enclosure::from_rational(&h1_lo, bits)?.add(&h2(&Enclosure::from_rational(hi, bits)?)?);
        // h2' = -(1/20) e^-x x^5 (6 - x) over the window.
        let w = Enclosure::from_rational_bounds(lo, hi, bits)?;
        let slope = exp_enclosure(&w.neg())?
            .mul(&w.powu(5))
            .mul(&w.neg().add_rational(&int(6)))
            .div_rational(&int(20))?
            .neg();
        Ok(Evaluation::new(bound.clone(), (bound, slope)))
    })?;
    let h1_increasing = h1_slope_min.is_positive();
    let h2_decreasing = h2_slope.hi().is_negative();
    if verdict.is_certified() && !(h1_increasing && h2_decreasing) {
        verdict = CertVerdict::inconclusive(
            verdict.gap.clone(),
            true,
            verdict.precision_used,
            InconclusiveReason::SideCondition {
                detail: "monotone split not certified".into(),
            },
        );
    }
    let bits = verdict.precision_used;
    let (s_lo, s_hi) = h2_slope.decimal_bounds();
    Ok(BoundReport {
        name: BoundName::ClaimII,
        point: vec![param("lambda_lo", lo), param("lambda_hi", hi), param("N", 5)],
        lhs,
        rhs: Enclosure::zero(bits),
        verdict,
        notes: vec![
            "lhs = h1(lambda_lo) + h2(lambda_hi), a lower bound for h(lambda, 5)".into(),
            format!("h1' >= {h1_slope_min} > 0 on the window: {h1_increasing}"),
            format!("h2' in [{s_lo}, {s_hi}] < 0 on the window: {h2_decreasing}"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::Status;
    use crate::testutil::assert_digits;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn e(bits: u32, s: &str) -> Enclosure {
        Enclosure::from_rational(&q(s), bits).unwrap()
    }

    #[test]
    fn fact1_worked_point() {
        let r = fact1_lower_bound(&q("2"), 5, &policy()).unwrap();
        assert!(r.verdict.is_certified());
        assert!(r.lhs.is_point() && r.lhs.contains_rational(&q("7")));
        assert_digits(&r.rhs, "6.98905609893065022723");
        assert_digits(&r.verdict.gap, "0.0109439010693497727");
        assert!(fact1_lower_bound(&q("3/2"), 5, &policy()).unwrap().verdict.is_certified());
    }

    #[test]
    fn fact1_requires_lambda_below_n_plus_one() {
        assert!(fact1_lower_bound(&q("6"), 5, &policy()).is_err());
        assert!(fact1_lower_bound(&q("0"), 5, &policy()).is_err());
        assert!(fact1_lower_bound(&q("1"), 0, &policy()).is_err());
    }

    #[test]
    fn fact1_gap_decreases_with_n() {
        let mut prev = None;
        for n in 5..=30 {
            let r = fact1_lower_bound(&q("2"), n, &policy()).unwrap();
            assert!(r.verdict.is_certified(), "N = {n}");
            if let Some(p) = prev {
                assert!(r.verdict.gap.hi() < &p);
            }
            prev = Some(r.verdict.gap.lo().clone());
        }
    }

    #[test]
    fn fact2_worked_points() {
        let r = fact2_lower_bound(&q("2"), 5, &policy()).unwrap();
        assert!(r.verdict.is_certified());
        assert_digits(&r.lhs, "0.1456417405668204886");
        assert_digits(&r.rhs, "0.14510362397727092138");
        assert!(fact2_lower_bound(&q("3/2"), 5, &policy()).unwrap().verdict.is_certified());
        let far = fact2_lower_bound(&q("2"), 50, &policy()).unwrap();
        assert!(far.verdict.is_certified());
        assert!(far.verdict.precision_used > 128);
        assert!(far.verdict.gap.hi().to_rational() < q("1e-60"));
    }

    #[test]
    fn two_point_examples() {
        let r = two_point_inequality(&q("2"), 5, &policy()).unwrap();
        assert!(r.verdict.is_certified());
        assert_digits(&r.lhs, "1.0194921839677434205");
        assert!(r.notes[0].starts_with("inside"));
        assert!(two_point_inequality(&q("3/2"), 5, &policy()).unwrap().verdict.is_certified());
        let small = two_point_inequality(&q("1/10"), 5, &policy()).unwrap();
        assert_eq!(small.verdict.status, Status::Refuted);
        assert_digits(&small.lhs, "0.9999999308622944149");
        assert!(small.notes[0].starts_with("outside"));
    }

    #[test]
    fn h_reference_values() {
        let h = h_function(&e(128, "3/2"), 5).unwrap();
        assert_digits(&h, "0.62292040097796457399");
        let h = h_function(&e(128, "2"), 5).unwrap();
        assert_digits(&h, "1.5669270936428393859");
        for n in [1, 4, 9] {
            assert!(h_function(&e(128, "1"), n).unwrap().hi().is_negative());
        }
        assert!(h_function(&e(64, "2"), 0).is_err());
    }

    #[test]
    fn h_interval_extension_is_monotone() {
        let parent = Enclosure::from_rational_bounds(&q("3/2"), &q("2"), 128).unwrap();
        let child = Enclosure::from_rational_bounds(&q("8/5"), &q("7/4"), 128).unwrap();
        for n in [5, 8, 20] {
            assert!(h_function(&parent, n).unwrap().contains(&h_function(&child, n).unwrap()));
        }
    }

    #[test]
    fn chain_bound_implies_two_point() {
        for lambda in ["3/2", "7/4", "2"] {
            for n in 5..=12 {
                let lb = two_point_chain_bound(&q(lambda), n, 128).unwrap();
                let tp = two_point_inequality(&q(lambda), n, &policy()).unwrap();
                assert!(lb.lo().is_positive());
                assert!(tp.verdict.is_certified());
                assert!(tp.verdict.gap.hi() >= lb.lo());
            }
        }
    }

    #[test]
    fn claim1_steps() {
        for lambda in ["3/2", "2"] {
            let r = claim1_step_check(&q(lambda), 5, &policy()).unwrap();
            assert!(r.verdict.is_certified());
            assert_eq!(r.notes[1], "factorization exact: true");
        }
        for n in [1, 5, 17, 40] {
            let gap = claim1_identity_gap(&q("7/4"), n, 128).unwrap();
            assert!(gap.contains_zero());
            assert!(gap.width_rational() < q("1e-30"));
        }
        let w = claim1_step_window_check(&q("3/2"), &q("2"), 5, &policy()).unwrap();
        assert!(w.verdict.is_certified());
    }

    #[test]
    fn claim2_full_window() {
        let r = claim2_check(&q("3/2"), &q("2"), &policy()).unwrap();
        assert!(r.verdict.is_certified());
        assert_digits(&r.lhs, "0.3169270936428393859");
        assert!(r.lhs.width_rational() < q("1e-20"));
        assert!(r.notes[1].ends_with("true") && r.notes[2].ends_with("true"));
    }

    #[test]
    fn claim2_degenerate_window_is_h() {
        let r = claim2_check(&q("3/2"), &q("3/2"), &policy()).unwrap();
        assert_digits(&r.lhs, "0.62292040097796457399");
        assert!(claim2_check(&q("1"), &q("2"), &policy()).is_err());
        assert!(claim2_check(&q("2"), &q("3/2"), &policy()).is_err());
        assert!(claim2_check(&q("3/2"), &q("9/4"), &policy()).is_err());
    }
}
