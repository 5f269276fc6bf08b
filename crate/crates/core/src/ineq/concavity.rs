use super::verdict::{escalate, CertVerdict, Evaluation};
use super::IneqError;
use crate::dist::{DiscretePmf, Weights};
use crate::rigor::{Enclosure, ExactRational, PrecisionPolicy};

/// Multiplier of `p(n+1) p(n-1)` in the defect at `n`.
type Factor = fn(u64) -> ExactRational;

fn log_concave_factor(_: u64) -> ExactRational {
    ExactRational::one()
}

fn ulc_factor(n: u64) -> ExactRational {
    ExactRational::one() + ExactRational::from_integer(n).recip().expect("interior n >= 1")
}

fn exact_min_defect(w: &[ExactRational], start: u64, factor: Factor) -> Option<ExactRational> {
    (1..w.len().saturating_sub(1))
        .map(|i| {
            let n = start + i as u64;
            &(&w[i] * &w[i]) - &(&factor(n) * &(&w[i - 1] * &w[i + 1]))
        })
        .min()
}

/// Minimum over interior support points of `p(n)^2 - c(n) p(n-1) p(n+1)`;
/// `None` when the support has no interior point.
fn min_defect(pmf: &DiscretePmf, factor: Factor, bits: u32) -> Result<Option<Enclosure>, IneqError> {
    let start = pmf.support_start();
    Ok(match pmf.weights() {
        Weights::Exact(w) => exact_min_defect(w, start, factor)
            .map(|d| Enclosure::from_rational(&d, bits))
            .transpose()?,
        // p = s r with s > 0 scales every defect by s^2.
        Weights::Scaled { relative, scale } => exact_min_defect(relative, start, factor)
            .map(|d| scale.with_bits(bits).powu(2).mul_rational(&d)),
        Weights::Enclosed(_) => {
            let w = pmf.weight_enclosures(bits)?;
            (1..w.len().saturating_sub(1))
                .map(|i| {
                    let n = start + i as u64;
                    w[i].powu(2).sub(&w[i - 1].mul(&w[i + 1]).mul_rational(&factor(n)))
                })
                .reduce(|a, b| a.min(&b))
        }
    })
}

fn check(pmf: &DiscretePmf, factor: Factor, policy: &PrecisionPolicy) -> Result<CertVerdict, IneqError> {
    let (_, verdict) = escalate(policy, false, |bits| {
        let pmf = pmf.at_precision(bits)?;
        // No interior point: the condition holds vacuously.
        let gap = min_defect(&pmf, factor, bits)?.unwrap_or_else(|| Enclosure::zero(bits));
        Ok(Evaluation::new(gap, ()))
    })?;
    Ok(verdict)
}

/// Non-strict `p(n)^2 >= p(n-1) p(n+1)` at every interior support point.
/// The gap is the smallest defect. Supports are contiguous by construction.
pub fn is_log_concave(pmf: &DiscretePmf, policy: &PrecisionPolicy) -> Result<CertVerdict, IneqError> {
    check(pmf, log_concave_factor, policy)
}

/// Non-strict `p(n)^2 >= (1 + 1/n) p(n-1) p(n+1)` at every interior point.
pub fn is_ultra_log_concave(pmf: &DiscretePmf, policy: &PrecisionPolicy) -> Result<CertVerdict, IneqError> {
    check(pmf, ulc_factor, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{build_pmf_at, FamilySpec};
    use crate::ineq::Status;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn exact(start: u64, w: &[&str]) -> DiscretePmf {
        let spec = FamilySpec::Explicit {
            support_start: start,
            weights: w.iter().map(|s| q(s)).collect(),
        };
        build_pmf_at(&spec, 64, &q("1")).unwrap()
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn binomial_is_log_concave_and_ulc() {
        let x = build_pmf_at(&FamilySpec::Binomial { m: 4, p: q("1/4") }, 128, &q("1")).unwrap();
        assert_eq!(is_log_concave(&x, &policy()).unwrap().status, Status::Certified);
        assert_eq!(is_ultra_log_concave(&x, &policy()).unwrap().status, Status::Certified);
    }

    #[test]
    fn log_concavity_violation() {
        let x = exact(0, &["1/3", "1/6", "1/2"]);
        let v = is_log_concave(&x, &policy()).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert!(v.gap.contains_rational(&q("-5/36")));
    }

    #[test]
    fn point_mass_is_vacuously_certified() {
        let x = DiscretePmf::point_mass(3);
        let v = is_log_concave(&x, &policy()).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.gap.is_point() && v.gap.lo().is_zero());
        assert!(is_ultra_log_concave(&x, &policy()).unwrap().is_certified());
    }

    #[test]
    fn ultra_log_affine_meets_ulc_with_equality() {
        let x = build_pmf_at(
            &FamilySpec::UltraLogAffine {
                lambda: q("2"),
                k: 1,
                n: 7,
            },
            128,
            &q("1"),
        )
        .unwrap();
        let v = is_ultra_log_concave(&x, &policy()).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.gap.is_point() && v.gap.lo().is_zero());
    }

    #[test]
    fn flat_weights_are_not_ulc() {
        let x = exact(0, &["1", "1", "1"]);
        assert_eq!(is_ultra_log_concave(&x, &policy()).unwrap().status, Status::Refuted);
        assert_eq!(is_log_concave(&x, &policy()).unwrap().status, Status::Certified);
    }

    #[test]
    fn poisson_meets_ulc_with_equality() {
        let x = build_pmf_at(&FamilySpec::Poisson { lambda: q("3/2") }, 128, &q("1e-30")).unwrap();
        let v = is_ultra_log_concave(&x, &policy()).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.gap.lo().is_zero());
    }

    #[test]
    fn enclosed_weights_use_interval_defects() {
        let w = ["1/4", "1/2", "1/4"]
            .iter()
            .map(|s| Enclosure::from_rational(&q(s), 96).unwrap())
            .collect();
        let x = DiscretePmf::from_enclosures(0, w, None).unwrap();
        assert!(is_log_concave(&x, &policy()).unwrap().is_certified());
    }

    /// Poisson shape times a log-concave sequence with decreasing ratios.
    fn ulc_weights() -> impl Strategy<Value = Vec<ExactRational>> {
        (1i64..6, prop::collection::vec((1i64..20, 0i64..20), 0..8)).prop_map(|(lam, pairs)| {
            let lambda = ExactRational::from_integer(lam);
            let mut ratios: Vec<ExactRational> = pairs
                .iter()
                .map(|(a, b)| ExactRational::new(*a, a + b).unwrap())
                .collect();
            ratios.sort_by(|a, b| b.cmp(a));
            let mut out = vec![ExactRational::one()];
            for (n, r) in ratios.iter().enumerate() {
                let next = &(out[n].clone() * r) * &(&lambda / &ExactRational::from_integer(n as i64 + 1));
                out.push(next);
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ulc_implies_log_concave(w in prop::collection::vec(1i64..50, 1..9)) {
            let spec = FamilySpec::Explicit {
                support_start: 0,
                weights: w.into_iter().map(ExactRational::from_integer).collect(),
            };
            let x = build_pmf_at(&spec, 64, &q("1")).unwrap();
            if is_ultra_log_concave(&x, &policy()).unwrap().is_certified() {
                prop_assert!(is_log_concave(&x, &policy()).unwrap().is_certified());
            }
        }

        #[test]
        fn constructed_sequences_are_ulc(w in ulc_weights()) {
            let spec = FamilySpec::Explicit { support_start: 0, weights: w };
            let x = build_pmf_at(&spec, 64, &q("1")).unwrap();
            prop_assert!(is_ultra_log_concave(&x, &policy()).unwrap().is_certified());
        }
    }
}
