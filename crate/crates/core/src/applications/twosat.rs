//! Weighted MAX-2SAT as a four-predicate VCSP.

use crate::applications::Literal;
use crate::error::{Error, Result};
use crate::model::{Constraint, VcspInstance};
use crate::predicate::Predicate;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSatClause {
    pub a: Literal,
    pub b: Literal,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoSatFormula {
    n: usize,
    clauses: Vec<TwoSatClause>,
}

impl TwoSatFormula {
    pub fn new(n: usize, clauses: Vec<TwoSatClause>) -> Result<Self> {
        for (index, c) in clauses.iter().enumerate() {
            if !(c.weight.is_finite() && c.weight >= 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: c.weight,
                });
            }
            for lit in [c.a, c.b] {
                if lit.var >= n {
                    return Err(Error::IndexOutOfRange {
                        index,
                        var: lit.var,
                        n,
                    });
                }
            }
        }
        Ok(TwoSatFormula { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[TwoSatClause] {
        &self.clauses
    }

    /// Total weight of clauses with at least one true literal.
    pub fn value(&self, a: &[bool]) -> f64 {
        self.clauses
            .iter()
            .filter(|c| c.a.is_true(a) || c.b.is_true(a))
            .map(|c| c.weight)
            .fold(0.0, |s, w| s + w)
    }
}

/// Predicate on `(var(a), var(b))` satisfied exactly when the clause is.
pub fn clause_predicate(a: Literal, b: Literal) -> Predicate {
    match (a.negated, b.negated) {
        (false, false) => Predicate::OR,
        (true, true) => Predicate::NAND,
        // ¬x ∨ y fails only at (1, 0)
        (true, false) => Predicate::N10,
        (false, true) => Predicate::N01,
    }
}

/// One constraint per clause, in clause order. Zero-weight clauses vanish,
/// so indices line up only when every weight is positive.
pub fn encode_2sat(f: &TwoSatFormula) -> VcspInstance {
    let constraints = f
        .clauses
        .iter()
        .map(|c| Constraint::new(c.a.var, c.b.var, clause_predicate(c.a, c.b), c.weight));
    VcspInstance::new(f.n, constraints).expect("validated formula encodes to a valid instance")
}
