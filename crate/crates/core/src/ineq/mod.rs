//! Property checks and certified comparisons.
//!
//! Every comparison is phrased as the sign of `gap = lhs - rhs` and decided
//! from an enclosure of `gap`, re-evaluated at growing precision until the
//! sign is settled or the policy cap is reached.

mod bounds;
mod cases;
mod concavity;
mod entropy;
mod maxcmp;
mod region;
mod verdict;

pub use bounds::{
    claim1_identity_gap, claim1_step_check, claim1_step_window_check, claim2_check,
    fact1_lower_bound, fact2_lower_bound, h_function, two_point_chain_bound, two_point_inequality,
};
pub use concavity::{is_log_concave, is_ultra_log_concave};
pub use entropy::{renyi_entropy, RenyiOrder};
pub use maxcmp::{check_max_inequality, MaxComparison};
pub use region::{certify_counterexample_region, RegionCertificate};
pub use cases::{binomial_case_check, binomial_fm_check, ztp_f_increasing_check, ztp_strict_check};
pub use verdict::{
    BoundName, BoundReport, BoundReportJson, CertVerdict, InconclusiveReason, Status, VerdictJson,
};

use thiserror::Error;

use crate::dist::DistError;
use crate::rigor::RigorError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IneqError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Rigor(#[from] RigorError),
}

fn precondition<T>(msg: impl Into<String>) -> Result<T, IneqError> {
    Err(IneqError::Precondition(msg.into()))
}

fn param(name: &str, value: impl ToString) -> (String, String) {
    (name.to_string(), value.to_string())
}
