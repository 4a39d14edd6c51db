//! Deterministic noncontextual value assignments and the classical bound.
//!
//! Everything here is integer arithmetic.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::pm_square::{Label, CONTEXTS};

pub const ASSIGNMENT_COUNT: usize = 512;
pub const CLASSICAL_BOUND: i32 = 4;

/// A ±1 value for each of the nine observables, indexed as `Label::ALL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Assignment {
    pub values: [i8; 9],
}

impl Assignment {
    /// Assignment number `n` in binary counting: `A` is the most significant
    /// bit and a set bit means −1.
    pub fn from_index(n: u16) -> Self {
        Self { values: core::array::from_fn(|i| if (n >> (8 - i)) & 1 == 0 { 1 } else { -1 }) }
    }

    pub fn value(&self, label: Label) -> i8 {
        self.values[label.index()]
    }

    /// Compact form such as `++-+-++++` in label order.
    pub fn signs(&self) -> alloc::string::String {
        self.values.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
    }
}

pub fn enumerate_assignments() -> Vec<Assignment> {
    (0..ASSIGNMENT_COUNT as u16).map(Assignment::from_index).collect()
}

/// χ with every observable replaced by its predefined value.
pub fn chi_of_assignment(a: &Assignment) -> i32 {
    CONTEXTS
        .iter()
        .map(|ctx| i32::from(ctx.sign) * ctx.ordered_labels.iter().map(|&l| i32::from(a.value(l))).product::<i32>())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCertificate {
    pub max_chi: i32,
    pub min_chi: i32,
    pub assignments: usize,
    /// Assignments attaining the maximum, in enumeration order.
    pub maximizers: Vec<Assignment>,
}

impl BoundCertificate {
    pub fn argmax_count(&self) -> usize {
        self.maximizers.len()
    }
}

/// Exhaustive maximum of χ over all assignments; fails unless it equals 4.
pub fn certify_bound() -> Result<BoundCertificate> {
    let all = enumerate_assignments();
    let values: Vec<i32> = all.iter().map(chi_of_assignment).collect();
    let max_chi = values.iter().copied().max().unwrap_or(i32::MIN);
    let min_chi = values.iter().copied().min().unwrap_or(i32::MAX);
    if max_chi != CLASSICAL_BOUND {
        return Err(Error::BoundViolated(max_chi));
    }
    let maximizers = all.iter().zip(&values).filter(|(_, &v)| v == max_chi).map(|(a, _)| *a).collect();
    Ok(BoundCertificate { max_chi, min_chi, assignments: all.len(), maximizers })
}
