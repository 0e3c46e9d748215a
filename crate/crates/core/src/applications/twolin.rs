//! Weighted two-variable linear equations over GF(2).

use crate::error::{Error, Result};
use crate::model::{Constraint, VcspInstance};
use crate::predicate::Predicate;

/// `x_u + x_v = rhs (mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearEquation {
    pub u: usize,
    pub v: usize,
    pub rhs: bool,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoLinSystem {
    n: usize,
    equations: Vec<LinearEquation>,
}

impl TwoLinSystem {
    pub fn new(n: usize, equations: Vec<LinearEquation>) -> Result<Self> {
        for (index, eq) in equations.iter().enumerate() {
            if !(eq.weight.is_finite() && eq.weight >= 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: eq.weight,
                });
            }
            for var in [eq.u, eq.v] {
                if var >= n {
                    return Err(Error::IndexOutOfRange { index, var, n });
                }
            }
        }
        Ok(TwoLinSystem { n, equations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[LinearEquation] {
        &self.equations
    }

    pub fn value(&self, a: &[bool]) -> f64 {
        self.equations
            .iter()
            .filter(|eq| (a[eq.u] ^ a[eq.v]) == eq.rhs)
            .map(|eq| eq.weight)
            .fold(0.0, |s, w| s + w)
    }
}

/// `rhs = 1` becomes Cut, `rhs = 0` becomes unCut.
pub fn encode_2lin(sys: &TwoLinSystem) -> VcspInstance {
    let constraints = sys.equations.iter().map(|eq| {
        let p = if eq.rhs { Predicate::CUT } else { Predicate::UNCUT };
        Constraint::new(eq.u, eq.v, p, eq.weight)
    });
    VcspInstance::new(sys.n, constraints).expect("validated system encodes to a valid instance")
}
