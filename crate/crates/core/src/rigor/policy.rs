use serde::{Deserialize, Serialize};

use super::RigorError;

/// Schedule of working precisions tried by a certification before it gives
/// up as inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
    pub growth_factor: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            initial_bits: 128,
            max_bits: 4096,
            growth_factor: 2,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, max_bits: u32, growth_factor: u32) -> Result<Self, RigorError> {
        let policy = Self {
            initial_bits,
            max_bits,
            growth_factor,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// A single evaluation at exactly `bits`.
    pub fn fixed(bits: u32) -> Self {
        Self {
            initial_bits: bits,
            max_bits: bits,
            growth_factor: 2,
        }
    }

    pub fn validate(&self) -> Result<(), RigorError> {
        if self.initial_bits < 2 {
            return Err(RigorError::InvalidPrecision(self.initial_bits));
        }
        if self.initial_bits > self.max_bits {
            return Err(RigorError::InvalidPolicy(format!(
                "initial_bits {} exceeds max_bits {}",
                self.initial_bits, self.max_bits
            )));
        }
        if self.growth_factor < 2 {
            return Err(RigorError::InvalidPolicy(format!(
                "growth_factor must be at least 2, got {}",
                self.growth_factor
            )));
        }
        Ok(())
    }

    /// Increasing precisions `initial, initial*g, ...`, capped at `max_bits`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.initial_bits];
        let mut bits = self.initial_bits;
        while bits < self.max_bits {
            bits = bits.saturating_mul(self.growth_factor).min(self.max_bits);
            out.push(bits);
        }
        out
    }
}
