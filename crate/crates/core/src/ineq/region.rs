use super::bounds::{claim1_step_window_check, claim2_check};
use super::maxcmp::check_max_inequality;
use super::verdict::BoundReport;
use super::{param, precondition, IneqError};
use crate::dist::{build_pmf_at, FamilySpec};
use crate::rigor::{ExactRational, PrecisionPolicy};

/// Both routes to `max p_X < max p_Z` for `X = UltraLogAffine(lambda, 0, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCertificate {
    /// `h(., 5) > 0` on the window, then `h(., N+1) > h(., N)` for
    /// `N = 5 .. n_max - 1`, each over the whole window.
    pub analytic: Vec<BoundReport>,
    /// Direct comparisons on the grid `lambda = lo, lo + step, ..` (plus `hi`)
    /// times `N = 5 ..= n_max`.
    pub direct: Vec<BoundReport>,
}

impl RegionCertificate {
    pub fn analytic_certified(&self) -> bool {
        self.analytic.iter().all(|r| r.verdict.is_certified())
    }

    pub fn direct_refuted(&self) -> bool {
        self.direct.iter().all(|r| r.verdict.is_refuted())
    }

    /// Counterexample confirmed by both routes.
    pub fn confirmed(&self) -> bool {
        self.analytic_certified() && self.direct_refuted()
    }
}

fn lambda_grid(lo: &ExactRational, hi: &ExactRational, step: &ExactRational) -> Vec<ExactRational> {
    let mut grid = Vec::new();
    let mut x = lo.clone();
    while x <= *hi {
        grid.push(x.clone());
        x = &x + step;
    }
    if grid.last() != Some(hi) {
        grid.push(hi.clone());
    }
    grid
}

pub fn certify_counterexample_region(
    lo: &ExactRational,
    hi: &ExactRational,
    n_max: u64,
    lambda_step: &ExactRational,
    policy: &PrecisionPolicy,
) -> Result<RegionCertificate, IneqError> {
    if n_max < 5 {
        return precondition(format!("need N_max >= 5, got {n_max}"));
    }
    if !lambda_step.is_positive() {
        return precondition("lambda step must be positive");
    }
    let mut analytic = vec![claim2_check(lo, hi, policy)?];
    for n in 5..n_max {
        analytic.push(claim1_step_window_check(lo, hi, n, policy)?);
    }
    let mut direct = Vec::new();
    for lambda in lambda_grid(lo, hi, lambda_step) {
        for n in 5..=n_max {
            let spec = FamilySpec::UltraLogAffine {
                lambda: lambda.clone(),
                k: 0,
                n,
            };
            let x = build_pmf_at(&spec, policy.initial_bits, &ExactRational::one())?;
            let cmp = check_max_inequality(&x, policy)?;
            direct.push(cmp.into_report(vec![param("lambda", &lambda), param("N", n)]));
        }
    }
    Ok(RegionCertificate { analytic, direct })
}
