//! Multi-indices for monomial exponents and the signed grading they induce.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;

/// Pair of nonnegative exponents `(a1, a2)` of a monomial `z1^a1 z2^a2`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MultiIndex {
    pub a1: u32,
    pub a2: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { a1: 0, a2: 0 };

    pub fn new(a1: u32, a2: u32) -> Self {
        MultiIndex { a1, a2 }
    }

    /// Total degree `|α| = a1 + a2`.
    pub fn order(&self) -> u32 {
        self.a1 + self.a2
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.a1 >= other.a1 && self.a2 >= other.a2
    }

    /// Componentwise difference when it stays in `Z^2_+`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dominates(other) {
            Some(MultiIndex::new(self.a1 - other.a1, self.a2 - other.a2))
        } else {
            None
        }
    }

    /// Signed difference `self - other` as a grading index.
    pub fn grade_sub(&self, other: &MultiIndex) -> GradeIndex {
        GradeIndex {
            g1: i64::from(self.a1) - i64::from(other.a1),
            g2: i64::from(self.a2) - i64::from(other.a2),
        }
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.a1 + rhs.a1, self.a2 + rhs.a2)
    }
}

impl From<(u32, u32)> for MultiIndex {
    fn from((a1, a2): (u32, u32)) -> Self {
        MultiIndex::new(a1, a2)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

/// Signed pair labelling the rotation-equivariance class of a monomial
/// expression: `z^n conj(z)^j` transforms with grade `n - j`, which may be
/// negative in either slot.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GradeIndex {
    pub g1: i64,
    pub g2: i64,
}

impl GradeIndex {
    pub fn new(g1: i64, g2: i64) -> Self {
        GradeIndex { g1, g2 }
    }

    /// True when both components are nonnegative, i.e. the grade lies in `Z^2_+`.
    pub fn is_nonnegative(&self) -> bool {
        self.g1 >= 0 && self.g2 >= 0
    }
}

impl fmt::Display for GradeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g1, self.g2)
    }
}
