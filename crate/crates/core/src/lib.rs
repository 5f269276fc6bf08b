//! Exact and interval-certified computations on discrete distributions over
//! the nonnegative integers: (ultra) log-concavity, modes, Rényi entropies,
//! and the comparison of the largest atom against a Poisson law of the same
//! mean.

pub mod dist;
pub mod ineq;
pub mod rigor;

pub use rigor::{Enclosure, ExactRational, PrecisionPolicy};

#[cfg(test)]
mod testutil;
