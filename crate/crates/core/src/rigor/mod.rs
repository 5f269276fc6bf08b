//! Exact rationals and outward-rounded interval enclosures.

mod dyadic;
mod elementary;
mod enclosure;
mod policy;
mod rational;

pub use dyadic::{Dyadic, Round};
pub use elementary::{exp_enclosure, exp_rational, ln2_enclosure, ln_enclosure, ln_rational};
pub use enclosure::{certify_sign, rational_to_enclosure, Enclosure, Sign};
pub use policy::PrecisionPolicy;
pub use rational::{factorial, ExactRational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigorError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("division by an enclosure containing zero")]
    DivisionByZero,
    #[error("precision must be at least 2 bits, got {0}")]
    InvalidPrecision(u32),
    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),
    #[error("enclosure lower bound exceeds upper bound")]
    InvertedBounds,
    #[error("cannot parse {0:?} as an exact rational")]
    Parse(String),
}
