use std::fmt;
use std::str::FromStr;

use super::IneqError;
use crate::dist::DiscretePmf;
use crate::rigor::{exp_enclosure, ln_enclosure, Dyadic, Enclosure, ExactRational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RenyiOrder {
    Finite(ExactRational),
    Infinity,
}

impl FromStr for RenyiOrder {
    type Err = IneqError;

    /// Accepts `inf`/`infinity` or an exact rational.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::Infinity);
        }
        let alpha: ExactRational = t
            .parse()
            .map_err(|e| IneqError::Precondition(format!("invalid order {s:?}: {e}")))?;
        Ok(Self::Finite(alpha))
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(a) => write!(f, "{a}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// `p^alpha` for `p > 0`, exact when `p` is a point and `alpha` an integer.
fn power(p: &Enclosure, alpha: &ExactRational) -> Result<Enclosure, IneqError> {
    if alpha.is_integer() {
        if let Some(k) = alpha.floor_i64().and_then(|k| u32::try_from(k).ok()) {
            return Ok(p.powu(k));
        }
    }
    Ok(exp_enclosure(&ln_enclosure(p)?.mul_rational(alpha))?)
}

/// Enclosure of `H_alpha = -ln(sum p^alpha) / (alpha - 1)`, or `-ln max p`
/// for `alpha = inf`. Truncated tails contribute `[0, tail power-sum bound]`.
pub fn renyi_entropy(pmf: &DiscretePmf, order: &RenyiOrder, bits: u32) -> Result<Enclosure, IneqError> {
    match order {
        RenyiOrder::Infinity => Ok(ln_enclosure(&pmf.max_pmf(bits)?)?.neg()),
        RenyiOrder::Finite(alpha) => {
            if *alpha == 1 {
                return Err(IneqError::Precondition(
                    "order 1 is the Shannon limit, which is out of scope".into(),
                ));
            }
            if !alpha.is_positive() {
                return Err(IneqError::Precondition(format!("order must be positive, got {alpha}")));
            }
            let mut sum = match pmf.exact_weights() {
                Some(w) if alpha.is_integer() => {
                    let k = alpha.floor_i64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| {
                        IneqError::Precondition(format!("order {alpha} too large"))
                    })?;
                    let s: ExactRational = w.iter().map(|p| p.powu(k)).sum();
                    Enclosure::from_rational(&s, bits)?
                }
                _ => {
                    let w = pmf.weight_enclosures(bits)?;
                    let mut acc = Enclosure::zero(bits);
                    for p in &w {
                        acc = acc.add(&power(p, alpha)?);
                    }
                    acc
                }
            };
            if let Some(tail) = pmf.tail() {
                let upper = tail.power_sum_upper(alpha, bits)?;
                sum = sum.add(&Enclosure::new(Dyadic::zero(), upper, bits)?);
            }
            let one_minus = ExactRational::one() - alpha;
            Ok(ln_enclosure(&sum)?.div_rational(&one_minus)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{build_pmf_at, FamilySpec};
    use crate::rigor::ln_rational;
    use crate::testutil::assert_digits;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn fin(s: &str) -> RenyiOrder {
        RenyiOrder::Finite(q(s))
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let x = DiscretePmf::point_mass(4);
        for order in [fin("2"), fin("1/2"), fin("7/3"), RenyiOrder::Infinity] {
            let h = renyi_entropy(&x, &order, 128).unwrap();
            assert!(h.contains_rational(&q("0")), "order {order}");
            assert!(h.width_rational() < q("1e-30"));
        }
    }

    #[test]
    fn uniform_has_log_n_entropy() {
        let x = DiscretePmf::uniform(0, 4).unwrap();
        let ln4 = ln_rational(&q("4"), 128).unwrap();
        for order in [fin("2"), fin("1/2"), fin("3"), RenyiOrder::Infinity] {
            let h = renyi_entropy(&x, &order, 128).unwrap();
            assert!(h.overlaps(&ln4), "order {order}");
            assert!(h.width_rational() < q("1e-30"));
        }
    }

    #[test]
    fn min_entropy_of_counterexample() {
        let spec = FamilySpec::UltraLogAffine {
            lambda: q("2"),
            k: 0,
            n: 5,
        };
        let x = build_pmf_at(&spec, 128, &q("1")).unwrap();
        let h = renyi_entropy(&x, &RenyiOrder::Infinity, 128).unwrap();
        assert_digits(&h, "1.29015050056698832496");
    }

    #[test]
    fn order_one_and_nonpositive_rejected() {
        let x = DiscretePmf::uniform(0, 2).unwrap();
        assert!(renyi_entropy(&x, &fin("1"), 64).is_err());
        assert!(renyi_entropy(&x, &fin("0"), 64).is_err());
        assert!(renyi_entropy(&x, &fin("-2"), 64).is_err());
    }

    #[test]
    fn ztp_half_order_is_finite_and_tight() {
        let x = build_pmf_at(&FamilySpec::ZeroTruncatedPoisson { lambda: q("1") }, 128, &q("1e-30")).unwrap();
        let h = renyi_entropy(&x, &fin("1/2"), 128).unwrap();
        assert!(h.lo().is_positive());
        assert!(h.width_rational() < q("1e-12"));
        assert_digits(&h, "1.266711661385360");
        // Renyi entropy is nonincreasing in the order.
        let hinf = renyi_entropy(&x, &RenyiOrder::Infinity, 128).unwrap();
        assert!(h.lo() > hinf.hi());
    }

    #[test]
    fn poisson_collision_entropy() {
        // sum_n p(n)^2 = e^-2 I_0(2) for Poisson(1).
        let x = build_pmf_at(&FamilySpec::Poisson { lambda: q("1") }, 128, &q("1e-40")).unwrap();
        let h = renyi_entropy(&x, &fin("2"), 128).unwrap();
        assert!(h.width_rational() < q("1e-20"));
        assert_digits(&h, "1.176006458517043717");
    }

    #[test]
    fn parses_orders() {
        assert_eq!("inf".parse::<RenyiOrder>().unwrap(), RenyiOrder::Infinity);
        assert_eq!("0.5".parse::<RenyiOrder>().unwrap(), fin("1/2"));
        assert!("x".parse::<RenyiOrder>().is_err());
    }
}
