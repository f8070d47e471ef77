use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Real genes followed by binary genes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genome<T> {
    pub reals: Vec<T>,
    pub bits: Vec<bool>,
}

impl<T: Scalar> Genome<T> {
    pub fn len(&self) -> usize {
        self.reals.len() + self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bitwise identity of every gene, used to spot duplicated members.
    pub fn key(&self) -> (Vec<u64>, Vec<bool>) {
        (self.reals.iter().map(|v| v.as_f64().to_bits()).collect(), self.bits.clone())
    }
}

/// A run of real genes that must stay on the probability simplex. Entries whose `allowed`
/// flag is false are pinned to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexBlock {
    pub start: usize,
    pub allowed: Vec<bool>,
}

impl SimplexBlock {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.allowed.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenomeLayout<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub simplex_blocks: Vec<SimplexBlock>,
    pub bits: usize,
}

impl<T: Scalar> GenomeLayout<T> {
    /// Unconstrained real genes in `[0, 1]`.
    pub fn unit_box(n: usize) -> Self {
        Self { lower: vec![T::zero(); n], upper: vec![T::one(); n], simplex_blocks: Vec::new(), bits: 0 }
    }

    pub fn reals(&self) -> usize {
        self.lower.len()
    }

    pub fn genes(&self) -> usize {
        self.reals() + self.bits
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() {
            return Err(Error::DimensionMismatch { expected: self.lower.len(), found: self.upper.len() });
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| !(l <= u)) {
            return Err(Error::InvalidConfig("lower bound above upper bound".into()));
        }
        for b in &self.simplex_blocks {
            if b.range().end > self.reals() {
                return Err(Error::InvalidConfig("simplex block outside the real genes".into()));
            }
            if !b.allowed.iter().any(|a| *a) {
                return Err(Error::InvalidConfig("simplex block with no allowed entry".into()));
            }
        }
        if self.genes() == 0 {
            return Err(Error::InvalidConfig("genome has no genes".into()));
        }
        Ok(())
    }

    /// Clips reals to their bounds and puts every simplex block back on the simplex: disallowed
    /// entries are zeroed and the rest rescaled to sum to one (uniform if they are all zero).
    pub fn repair(&self, genome: &mut Genome<T>) {
        for (i, v) in genome.reals.iter_mut().enumerate() {
            if v.is_nan() {
                *v = self.lower[i];
            }
            *v = v.max(self.lower[i]).min(self.upper[i]);
        }
        for block in &self.simplex_blocks {
            let r = block.range();
            let slice = &mut genome.reals[r];
            let mut sum = T::zero();
            for (v, &ok) in slice.iter_mut().zip(&block.allowed) {
                if !ok {
                    *v = T::zero();
                }
                *v = v.max(T::zero());
                sum = sum + *v;
            }
            if (sum - T::one()).abs() <= T::epsilon() * T::of(4.0) {
                // Already on the simplex; rescaling would only add rounding noise.
            } else if sum > T::zero() {
                for v in slice.iter_mut() {
                    *v = *v / sum;
                }
            } else {
                let k = T::of_usize(block.allowed.iter().filter(|a| **a).count());
                for (v, &ok) in slice.iter_mut().zip(&block.allowed) {
                    *v = if ok { T::one() / k } else { T::zero() };
                }
            }
        }
    }
}
