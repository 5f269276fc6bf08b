use super::verdict::{escalate, BoundName, BoundReport, CertVerdict, Evaluation};
use super::IneqError;
use crate::dist::{poisson_max_pmf, DiscretePmf};
use crate::rigor::{Enclosure, PrecisionPolicy};

/// `max_n P{X=n}` against `max_n P{Z=n}` for `Z ~ Poisson(E[X])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxComparison {
    pub verdict: CertVerdict,
    pub mean: Enclosure,
    pub max_x: Enclosure,
    pub max_z: Enclosure,
    /// Modes of `Z` that can attain `max_z` over the mean enclosure.
    pub z_modes: Vec<u64>,
}

impl MaxComparison {
    pub fn into_report(self, point: Vec<(String, String)>) -> BoundReport {
        let mut notes = vec![format!(
            "Poisson mode candidates {:?}",
            self.z_modes
        )];
        if let Err(k) = self.mean.floor_cell() {
            notes.push(format!("mean enclosure contains the integer {k}"));
        }
        BoundReport {
            name: BoundName::MaxVsPoisson,
            point,
            lhs: self.max_x,
            rhs: self.max_z,
            verdict: self.verdict,
            notes,
        }
    }
}

/// Strict comparison `max p_X > max p_Z`. The Poisson side is evaluated in
/// closed form over the whole mean enclosure, so no truncation enters it.
/// Pmfs built from a family are rebuilt at each escalated precision.
pub fn check_max_inequality(pmf: &DiscretePmf, policy: &PrecisionPolicy) -> Result<MaxComparison, IneqError> {
    let ((mean, max_x, max_z, z_modes), verdict) = escalate(policy, true, |bits| {
        let x = pmf.at_precision(bits)?;
        let mean = x.mean(bits)?;
        let max_x = x.max_pmf(bits)?;
        let z = poisson_max_pmf(&mean)?;
        let gap = max_x.sub(&z.value);
        Ok(Evaluation::new(gap, (mean, max_x, z.value, z.candidates)))
    })?;
    Ok(MaxComparison {
        verdict,
        mean,
        max_x,
        max_z,
        z_modes,
    })
}
