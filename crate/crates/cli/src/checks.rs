use clap::ValueEnum;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use ulc_core::dist::{build_pmf_at, poisson_max_pmf};
use ulc_core::ineq::{self, BoundName, BoundReport, CertVerdict, Status};
use ulc_core::{Enclosure, ExactRational, PrecisionPolicy};

use crate::error::CliError;
use crate::params::{FamilyKind, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    /// Largest atom against the Poisson law of the same mean.
    MaxVsPoisson,
    LogConcave,
    #[value(alias = "ulc")]
    #[serde(alias = "ulc")]
    UltraLogConcave,
    ZtpStrict,
    FZtp,
    BinomialCase,
    FM,
    Fact1,
    Fact2,
    TwoPoint,
    /// Positivity of h(lambda, N).
    H,
    Claim1Step,
    Claim2,
    CounterexampleRegion,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MaxVsPoisson => "max-vs-poisson",
            Self::LogConcave => "log-concave",
            Self::UltraLogConcave => "ultra-log-concave",
            Self::ZtpStrict => "ztp-strict",
            Self::FZtp => "f-ztp",
            Self::BinomialCase => "binomial-case",
            Self::FM => "f-m",
            Self::Fact1 => "fact1",
            Self::Fact2 => "fact2",
            Self::TwoPoint => "two-point",
            Self::H => "h",
            Self::Claim1Step => "claim1-step",
            Self::Claim2 => "claim2",
            Self::CounterexampleRegion => "counterexample-region",
        }
    }

    /// Whether the check needs a distribution built from the family.
    fn uses_family(self) -> bool {
        matches!(self, Self::MaxVsPoisson | Self::LogConcave | Self::UltraLogConcave)
    }
}

/// Result of one check at one parameter point.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub status: Status,
    /// Verdict of the headline comparison, absent for aggregates.
    pub verdict: Option<CertVerdict>,
    /// Side data `(E[X], max p_X, max p_Z)` when the family is buildable.
    pub side: Option<(Enclosure, Enclosure, Enclosure)>,
    pub json: Value,
}

#[derive(Clone, Debug)]
pub struct Context {
    pub policy: PrecisionPolicy,
    pub tail_eps: ExactRational,
}

fn single(report: BoundReport) -> CheckOutcome {
    CheckOutcome {
        status: report.verdict.status,
        json: serde_json::to_value(report.to_json()).expect("report serializes"),
        verdict: Some(report.verdict),
        side: None,
    }
}

fn aggregate(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut all_certified = true;
    for s in statuses {
        match s {
            Status::Refuted => return Status::Refuted,
            Status::Inconclusive => all_certified = false,
            Status::Certified => {}
        }
    }
    if all_certified {
        Status::Certified
    } else {
        Status::Inconclusive
    }
}

fn side_data(kind: FamilyKind, params: &Params, ctx: &Context) -> Result<(Enclosure, Enclosure, Enclosure), CliError> {
    let bits = ctx.policy.initial_bits;
    let pmf = build_pmf_at(&params.family_spec(kind)?, bits, &ctx.tail_eps)?;
    let mean = pmf.mean(bits)?;
    let max_x = pmf.max_pmf(bits)?;
    let max_z = poisson_max_pmf(&mean)?.value;
    Ok((mean, max_x, max_z))
}

fn binomial_k(params: &Params, m: u64, p: &ExactRational) -> Result<u64, CliError> {
    if let Some(k) = params.k {
        return Ok(k);
    }
    (p * &ExactRational::from_integer(m))
        .floor()
        .to_u64()
        .ok_or_else(|| CliError::Usage(format!("p = {p} must be nonnegative")))
}

/// Runs `check` at the point described by `params`.
pub fn run_check(check: CheckName, kind: FamilyKind, params: &Params, ctx: &Context) -> Result<CheckOutcome, CliError> {
    let policy = &ctx.policy;
    let what = check.as_str();
    let mut outcome = match check {
        CheckName::MaxVsPoisson | CheckName::LogConcave | CheckName::UltraLogConcave => {
            let spec = params.family_spec(kind)?;
            let pmf = build_pmf_at(&spec, policy.initial_bits, &ctx.tail_eps)?;
            let point = vec![("family".to_string(), spec.name().to_string())];
            if check == CheckName::MaxVsPoisson {
                let cmp = ineq::check_max_inequality(&pmf, policy)?;
                let side = (cmp.mean.clone(), cmp.max_x.clone(), cmp.max_z.clone());
                let mut out = single(cmp.into_report(point));
                out.side = Some(side);
                out
            } else {
                let (name, verdict) = if check == CheckName::LogConcave {
                    (BoundName::LogConcave, ineq::is_log_concave(&pmf, policy)?)
                } else {
                    (BoundName::UltraLogConcave, ineq::is_ultra_log_concave(&pmf, policy)?)
                };
                let bits = verdict.precision_used;
                single(BoundReport {
                    name,
                    point,
                    lhs: verdict.gap.clone(),
                    rhs: Enclosure::zero(bits),
                    verdict,
                    notes: vec!["lhs = smallest defect over interior support points".into()],
                })
            }
        }
        CheckName::ZtpStrict => single(ineq::ztp_strict_check(params.lambda(what)?, policy)?),
        CheckName::FZtp => {
            let grid = params.grid.as_ref().ok_or_else(|| CliError::Usage("f-ztp requires --grid".into()))?;
            let reports = ineq::ztp_f_increasing_check(grid, policy)?;
            let status = aggregate(reports.iter().map(|r| r.verdict.status));
            let json: Vec<_> = reports.iter().map(BoundReport::to_json).collect();
            CheckOutcome {
                status,
                verdict: None,
                side: None,
                json: serde_json::json!({ "status": status, "reports": json }),
            }
        }
        CheckName::BinomialCase => {
            let (m, p) = (params.m(what)?, params.p(what)?);
            single(ineq::binomial_case_check(m, binomial_k(params, m, p)?, p, policy)?)
        }
        CheckName::FM => single(ineq::binomial_fm_check(params.m(what)?, params.p(what)?, policy)?),
        CheckName::Fact1 => single(ineq::fact1_lower_bound(params.lambda(what)?, params.n(what)?, policy)?),
        CheckName::Fact2 => single(ineq::fact2_lower_bound(params.lambda(what)?, params.n(what)?, policy)?),
        CheckName::TwoPoint => single(ineq::two_point_inequality(params.lambda(what)?, params.n(what)?, policy)?),
        CheckName::H => {
            let lambda = params.lambda(what)?;
            let n = params.n(what)?;
            let report = h_positive(lambda, n, policy)?;
            single(report)
        }
        CheckName::Claim1Step => single(ineq::claim1_step_check(params.lambda(what)?, params.n(what)?, policy)?),
        CheckName::Claim2 => {
            let (lo, hi) = params.window(what)?;
            single(ineq::claim2_check(&lo, &hi, policy)?)
        }
        CheckName::CounterexampleRegion => {
            let (lo, hi) = params.window(what)?;
            let step = params.step.clone().unwrap_or_else(|| ExactRational::new(1, 20).expect("nonzero"));
            let cert = ineq::certify_counterexample_region(&lo, &hi, params.n(what)?, &step, policy)?;
            let status = if cert.confirmed() {
                Status::Certified
            } else if cert.analytic.iter().chain(&cert.direct).any(|r| {
                // A certified max inequality contradicts the counterexample.
                r.name == BoundName::MaxVsPoisson && r.verdict.is_certified()
            }) {
                Status::Refuted
            } else {
                Status::Inconclusive
            };
            let analytic: Vec<_> = cert.analytic.iter().map(BoundReport::to_json).collect();
            let direct: Vec<_> = cert.direct.iter().map(BoundReport::to_json).collect();
            CheckOutcome {
                status,
                verdict: None,
                side: None,
                json: serde_json::json!({
                    "status": status,
                    "confirmed": cert.confirmed(),
                    "analytic": analytic,
                    "direct": direct,
                }),
            }
        }
    };
    if outcome.side.is_none() && (check.uses_family() || family_is_natural(check, kind)) {
        outcome.side = side_data(kind, params, ctx).ok();
    }
    Ok(outcome)
}

/// Checks whose parameters also describe a natural member of the family.
fn family_is_natural(check: CheckName, kind: FamilyKind) -> bool {
    use CheckName::*;
    match kind {
        FamilyKind::Ula => matches!(check, Fact1 | Fact2 | TwoPoint | H | Claim1Step),
        FamilyKind::Ztp => check == ZtpStrict,
        FamilyKind::Binomial => matches!(check, BinomialCase | FM),
        _ => false,
    }
}

fn h_positive(lambda: &ExactRational, n: u64, policy: &PrecisionPolicy) -> Result<BoundReport, CliError> {
    let mut last = None;
    for bits in policy.schedule() {
        let h = ineq::h_function(&Enclosure::from_rational(lambda, bits)?, n)?;
        let verdict = CertVerdict::from_gap(h.clone(), true, bits);
        let settled = verdict.status != Status::Inconclusive;
        last = Some((h, verdict));
        if settled {
            break;
        }
    }
    let (h, verdict) = last.expect("nonempty schedule");
    let bits = verdict.precision_used;
    Ok(BoundReport {
        name: BoundName::H,
        point: vec![("lambda".into(), lambda.to_string()), ("N".into(), n.to_string())],
        lhs: h,
        rhs: Enclosure::zero(bits),
        verdict,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn ctx() -> Context {
        Context {
            policy: PrecisionPolicy::default(),
            tail_eps: q("1e-40"),
        }
    }

    fn ula(lambda: &str, n: u64) -> Params {
        Params {
            lambda: Some(q(lambda)),
            n: Some(n),
            ..Params::default()
        }
    }

    #[test]
    fn counterexample_point() {
        let out = run_check(CheckName::MaxVsPoisson, FamilyKind::Ula, &ula("2", 5), &ctx()).unwrap();
        assert_eq!(out.status, Status::Refuted);
        assert!(out.side.unwrap().1.contains_rational(&q("30/109")));
        assert_eq!(out.json["verdict"]["status"], "Refuted");
    }

    #[test]
    fn binomial_k_defaults_to_floor_mp() {
        let params = Params {
            m: Some(5),
            p: Some(q("2/5")),
            ..Params::default()
        };
        let out = run_check(CheckName::BinomialCase, FamilyKind::Binomial, &params, &ctx()).unwrap();
        assert_eq!(out.status, Status::Certified);
        assert_eq!(out.json["point"][1][1], "2");
        assert!(out.side.is_some());
    }

    #[test]
    fn missing_parameters_are_usage_errors() {
        let err = run_check(CheckName::Fact1, FamilyKind::Ula, &Params::default(), &ctx()).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }

    #[test]
    fn h_check_signs() {
        assert_eq!(run_check(CheckName::H, FamilyKind::Ula, &ula("2", 5), &ctx()).unwrap().status, Status::Certified);
        assert_eq!(run_check(CheckName::H, FamilyKind::Ula, &ula("1", 5), &ctx()).unwrap().status, Status::Refuted);
    }

    #[test]
    fn aggregates() {
        assert_eq!(aggregate([Status::Certified, Status::Certified]), Status::Certified);
        assert_eq!(aggregate([Status::Certified, Status::Inconclusive]), Status::Inconclusive);
        assert_eq!(aggregate([Status::Inconclusive, Status::Refuted]), Status::Refuted);
    }
}
