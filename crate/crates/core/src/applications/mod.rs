//! Encoders and pipelines for specific constraint problems.

pub mod hypergraph;
pub mod kcut;
pub mod ksat;
pub mod summod;
pub mod twolin;
pub mod twosat;

use std::fmt;

use serde::{Deserialize, Serialize};

/// A possibly negated boolean variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// From a nonzero DIMACS literal; variables are 1-based there.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        match lit {
            0 => None,
            l if l > 0 => Some(Literal::pos(l as usize - 1)),
            l => Some(Literal::neg(l.unsigned_abs() as usize - 1)),
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    #[inline]
    pub fn is_true(self, a: &[bool]) -> bool {
        a[self.var] != self.negated
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}
