//! Weighted MAX-kSAT through hypergraph cut sparsification.
//!
//! The hypergraph has a vertex for every literal plus one distinguished
//! vertex `f`: `x_i` sits at index `i`, `¬x_i` at `n + i` and `f` at `2n`.
//! A clause becomes the hyperedge `{f} ∪ {its literals}`. For an assignment
//! `A`, let `T_A` be `f` together with every literal that is false under
//! `A`. A clause is unsatisfied exactly when its hyperedge lies inside
//! `T_A`, and it can never be disjoint from `T_A` since it contains `f`, so
//! the clause is satisfied exactly when its hyperedge is cut by `T_A`.

use serde::{Deserialize, Serialize};

use crate::applications::hypergraph::{sample_hyperedges, Hyperedge, Hypergraph};
use crate::applications::Literal;
use crate::cut_sparsify::SamplerConfig;
use crate::error::{Error, Result};
use crate::model::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSatFormula {
    n: usize,
    clauses: Vec<Clause>,
    /// Weight of removed tautologies, satisfied by every assignment.
    offset: f64,
}

impl KSatFormula {
    /// Normalizes clauses: repeated literals are merged, tautologies are
    /// folded into the offset, and zero-weight clauses are dropped.
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        Self::with_offset(n, clauses, 0.0)
    }

    pub fn with_offset(n: usize, clauses: Vec<Clause>, offset: f64) -> Result<Self> {
        if !(offset.is_finite() && offset >= 0.0) {
            return Err(Error::InvalidWeight {
                index: usize::MAX,
                weight: offset,
            });
        }
        let mut offset = offset;
        let mut kept = Vec::with_capacity(clauses.len());
        for (index, mut c) in clauses.into_iter().enumerate() {
            if !(c.weight.is_finite() && c.weight >= 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: c.weight,
                });
            }
            if let Some(l) = c.literals.iter().find(|l| l.var >= n) {
                return Err(Error::IndexOutOfRange {
                    index,
                    var: l.var,
                    n,
                });
            }
            if c.weight == 0.0 {
                continue;
            }
            c.literals.sort();
            c.literals.dedup();
            let tautology = c
                .literals
                .windows(2)
                .any(|w| w[0].var == w[1].var && w[0].negated != w[1].negated);
            if tautology {
                offset += c.weight;
            } else {
                kept.push(c);
            }
        }
        Ok(KSatFormula {
            n,
            clauses: kept,
            offset,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn value(&self, a: &[bool]) -> f64 {
        self.offset
            + self
                .clauses
                .iter()
                .filter(|c| c.literals.iter().any(|l| l.is_true(a)))
                .map(|c| c.weight)
                .fold(0.0, |s, w| s + w)
    }
}

/// Hypergraph vertex of a literal.
pub fn literal_vertex(n: usize, l: Literal) -> usize {
    if l.negated {
        n + l.var
    } else {
        l.var
    }
}

/// The distinguished vertex `f`.
pub fn distinguished_vertex(n: usize) -> usize {
    2 * n
}

/// One hyperedge per clause, in clause order.
pub fn encode_ksat(f: &KSatFormula) -> Hypergraph {
    let n = f.n;
    let hyperedges = f
        .clauses
        .iter()
        .map(|c| Hyperedge {
            vertices: std::iter::once(distinguished_vertex(n))
                .chain(c.literals.iter().map(|&l| literal_vertex(n, l)))
                .collect(),
            weight: c.weight,
        })
        .collect();
    Hypergraph::new(2 * n + 1, hyperedges).expect("normalized formula encodes to a valid hypergraph")
}

/// `T_A`: the false literals under `A`, plus `f`.
pub fn assignment_cut_set(a: &[bool]) -> VertexSet {
    let n = a.len();
    let mut t = VertexSet::empty(2 * n + 1);
    for (i, &val) in a.iter().enumerate() {
        t.insert(if val { n + i } else { i });
    }
    t.insert(distinguished_vertex(n));
    t
}

/// Keeps the clauses whose hyperedges survive sampling, with the sampled
/// weights. The tautology offset carries over unchanged.
pub fn sparsify_ksat(f: &KSatFormula, cfg: &SamplerConfig) -> Result<KSatFormula> {
    let h = encode_ksat(f);
    let kept = sample_hyperedges(&h, cfg)?;
    let clauses = kept
        .iter()
        .map(|r| Clause {
            literals: f.clauses[r.index].literals.clone(),
            weight: r.weight,
        })
        .collect();
    Ok(KSatFormula {
        n: f.n,
        clauses,
        offset: f.offset,
    })
}
