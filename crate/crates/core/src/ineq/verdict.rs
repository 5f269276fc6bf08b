use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::IneqError;
use crate::rigor::{Enclosure, PrecisionPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Certified,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> char {
        match self {
            Self::Certified => 'C',
            Self::Refuted => 'R',
            Self::Inconclusive => 'I',
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Certified => "Certified",
            Self::Refuted => "Refuted",
            Self::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    /// The gap still contains zero at the largest precision allowed.
    StraddlesZeroAtCap,
    /// An enclosed quantity whose floor is needed straddles this integer.
    FloorAmbiguous { integer: String },
    /// Both sides are provably equal, so a strict inequality cannot hold.
    ExactEquality,
    /// A side condition of the argument could not be certified.
    SideCondition { detail: String },
}

/// Outcome of certifying `lhs - rhs > 0` (or `>= 0` when not strict).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertVerdict {
    pub status: Status,
    pub gap: Enclosure,
    pub precision_used: u32,
    pub strict: bool,
    pub reason: Option<InconclusiveReason>,
}

impl CertVerdict {
    /// Classifies a gap enclosure. Strict checks certify on `gap.lo > 0`,
    /// non-strict ones on `gap.lo >= 0`; refutation always needs `gap.hi < 0`.
    pub fn from_gap(gap: Enclosure, strict: bool, precision_used: u32) -> Self {
        let certified = if strict {
            gap.lo().is_positive()
        } else {
            !gap.lo().is_negative()
        };
        let (status, reason) = if certified {
            (Status::Certified, None)
        } else if gap.hi().is_negative() {
            (Status::Refuted, None)
        } else if strict && gap.is_point() && gap.lo().is_zero() {
            (Status::Inconclusive, Some(InconclusiveReason::ExactEquality))
        } else {
            (Status::Inconclusive, Some(InconclusiveReason::StraddlesZeroAtCap))
        };
        Self {
            status,
            gap,
            precision_used,
            strict,
            reason,
        }
    }

    pub fn inconclusive(gap: Enclosure, strict: bool, precision_used: u32, reason: InconclusiveReason) -> Self {
        Self {
            status: Status::Inconclusive,
            gap,
            precision_used,
            strict,
            reason: Some(reason),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn to_json(&self) -> VerdictJson {
        let (lo, hi) = self.gap.decimal_bounds();
        VerdictJson {
            status: self.status,
            gap: [lo, hi],
            precision_used: self.precision_used,
            strict: self.strict,
            reason: self.reason.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: Status,
    pub gap: [String; 2],
    pub precision_used: u32,
    pub strict: bool,
    pub reason: Option<InconclusiveReason>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundName {
    FactI,
    FactII,
    TwoPoint,
    H,
    ClaimIStep,
    ClaimII,
    ZtpStrict,
    FZtp,
    FM,
    BinomialCase,
    MaxVsPoisson,
    LogConcave,
    UltraLogConcave,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::FactI => "FactI",
            Self::FactII => "FactII",
            Self::TwoPoint => "two-point",
            Self::H => "h",
            Self::ClaimIStep => "ClaimI-step",
            Self::ClaimII => "ClaimII",
            Self::ZtpStrict => "ztp-strict",
            Self::FZtp => "f_ZTP",
            Self::FM => "f_m",
            Self::BinomialCase => "binomial-case",
            Self::MaxVsPoisson => "max-vs-poisson",
            Self::LogConcave => "log-concave",
            Self::UltraLogConcave => "ultra-log-concave",
        }
    }
}

/// A certified comparison `lhs` vs `rhs` at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub name: BoundName,
    pub point: Vec<(String, String)>,
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub verdict: CertVerdict,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn param(&self, name: &str) -> Option<&str> {
        self.point.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    pub fn to_json(&self) -> BoundReportJson {
        let pair = |e: &Enclosure| {
            let (lo, hi) = e.decimal_bounds();
            [lo, hi]
        };
        BoundReportJson {
            name: self.name,
            point: self.point.clone(),
            lhs: pair(&self.lhs),
            rhs: pair(&self.rhs),
            verdict: self.verdict.to_json(),
            notes: self.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReportJson {
    pub name: BoundName,
    pub point: Vec<(String, String)>,
    pub lhs: [String; 2],
    pub rhs: [String; 2],
    pub verdict: VerdictJson,
    pub notes: Vec<String>,
}

/// One evaluation of a comparison at a fixed precision.
pub(crate) struct Evaluation<T> {
    pub gap: Enclosure,
    pub data: T,
    /// Integer straddled by an enclosure whose floor the comparison needs.
    pub floor_straddle: Option<BigInt>,
}

impl<T> Evaluation<T> {
    pub fn new(gap: Enclosure, data: T) -> Self {
        Self {
            gap,
            data,
            floor_straddle: None,
        }
    }
}

/// Re-evaluates at each precision of the policy until the verdict is
/// decided or the cap is reached.
pub(crate) fn escalate<T>(
    policy: &PrecisionPolicy,
    strict: bool,
    mut eval: impl FnMut(u32) -> Result<Evaluation<T>, IneqError>,
) -> Result<(T, CertVerdict), IneqError> {
    policy.validate()?;
    let schedule = policy.schedule();
    let last = schedule.len() - 1;
    for (i, &bits) in schedule.iter().enumerate() {
        let ev = eval(bits)?;
        if let Some(k) = &ev.floor_straddle {
            if i == last {
                let reason = InconclusiveReason::FloorAmbiguous {
                    integer: k.to_string(),
                };
                return Ok((ev.data, CertVerdict::inconclusive(ev.gap, strict, bits, reason)));
            }
            continue;
        }
        let verdict = CertVerdict::from_gap(ev.gap, strict, bits);
        let settled = verdict.status != Status::Inconclusive
            || verdict.reason == Some(InconclusiveReason::ExactEquality);
        if settled || i == last {
            return Ok((ev.data, verdict));
        }
    }
    unreachable!("precision schedule is never empty")
}
