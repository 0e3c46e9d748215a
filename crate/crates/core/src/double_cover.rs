//! The bipartite double cover and the set mappings that turn predicate values
//! into cut values.
//!
//! Vertex `i` of the base graph has a positive copy `v_i` at index `i` and a
//! negative copy `v_{-i}` at index `i + base_n`. A base edge `(i, j)` becomes
//! the cover edge `(v_i, v_{-j})` with the same weight.
//!
//! For a vertex set `S` we write `-S` for the negative copies of its members
//! and `S̄` for the complement within the base vertices. The mappings below
//! satisfy, for every digraph `H` and every `S`:
//!
//! * single-set: `P_H(S) = Cut_{γ(H)}(f_P(S))`
//! * triple-set: `P_H(S) = ½ Σ_k Cut_{γ(H)}(f^k_P(S))`
//! * And family: `And_H(S) = P_{γ(H)}(f_P(S))`

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Edge, VertexSet, WeightedDigraph};
use crate::predicate::Predicate;

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleCoverGraph {
    base_n: usize,
    graph: WeightedDigraph,
}

impl DoubleCoverGraph {
    /// Wraps a graph on `2·base_n` vertices, checking that every edge runs
    /// from a positive copy to a negative copy.
    pub fn from_graph(base_n: usize, graph: WeightedDigraph) -> Result<Self> {
        if graph.n() != 2 * base_n {
            return Err(Error::DimensionMismatch {
                expected: 2 * base_n,
                got: graph.n(),
            });
        }
        if let Some(index) = graph
            .edges()
            .iter()
            .position(|e| e.src >= base_n || e.dst < base_n)
        {
            return Err(Error::MalformedCover { index });
        }
        Ok(DoubleCoverGraph { base_n, graph })
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn into_graph(self) -> WeightedDigraph {
        self.graph
    }
}

/// Label of a cover vertex: `v<i>` for positive copies, `v-<i>` for negative.
pub struct SignedVertex {
    pub base: usize,
    pub negative: bool,
}

impl SignedVertex {
    pub fn from_index(base_n: usize, idx: usize) -> Self {
        if idx < base_n {
            SignedVertex {
                base: idx,
                negative: false,
            }
        } else {
            SignedVertex {
                base: idx - base_n,
                negative: true,
            }
        }
    }
}

impl fmt::Display for SignedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "v-{}", self.base)
        } else {
            write!(f, "v{}", self.base)
        }
    }
}

pub fn gamma(g: &WeightedDigraph) -> DoubleCoverGraph {
    let base_n = g.n();
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge::new(e.src, e.dst + base_n, e.weight));
    let graph = WeightedDigraph::new(2 * base_n, edges).expect("cover of a valid graph is valid");
    DoubleCoverGraph { base_n, graph }
}

/// Inverse of [`gamma`]: `(v_i, v_{-j})` becomes `(v_i, v_j)`.
pub fn pull_back(cover: &DoubleCoverGraph) -> Result<WeightedDigraph> {
    let base_n = cover.base_n;
    let mut edges = Vec::with_capacity(cover.graph.m());
    for (index, e) in cover.graph.edges().iter().enumerate() {
        if e.src >= base_n || e.dst < base_n {
            return Err(Error::MalformedCover { index });
        }
        edges.push(Edge::new(e.src, e.dst - base_n, e.weight));
    }
    WeightedDigraph::new(base_n, edges)
}

/// Builds a cover-vertex set from optional positive and negative parts.
fn cover_set(base_n: usize, positive: Option<&VertexSet>, negative: Option<&VertexSet>) -> VertexSet {
    let mut t = VertexSet::empty(2 * base_n);
    if let Some(p) = positive {
        p.iter().for_each(|v| t.insert(v));
    }
    if let Some(q) = negative {
        q.iter().for_each(|v| t.insert(v + base_n));
    }
    t
}

fn check_universe(s: &VertexSet, base_n: usize) -> Result<()> {
    if s.universe() != base_n {
        return Err(Error::DimensionMismatch {
            expected: base_n,
            got: s.universe(),
        });
    }
    Ok(())
}

/// `f_P` for the predicates whose value is a single cut in the cover.
pub fn map_set_single(p: Predicate, s: &VertexSet, base_n: usize) -> Result<VertexSet> {
    check_universe(s, base_n)?;
    let sc = s.complement();
    let t = match p {
        Predicate::CUT => cover_set(base_n, Some(s), Some(s)),
        // Not S ∪ S̄: that set belongs to the constant-one predicate.
        Predicate::UNCUT => cover_set(base_n, Some(s), Some(&sc)),
        Predicate::ZERO_X => cover_set(base_n, Some(&sc), None),
        Predicate::X_ZERO => cover_set(base_n, None, Some(&sc)),
        Predicate::X_ONE => cover_set(base_n, None, Some(s)),
        Predicate::ONE_X => cover_set(base_n, Some(s), None),
        Predicate::ONE => cover_set(base_n, Some(&VertexSet::full(base_n)), None),
        Predicate::ZERO => VertexSet::empty(2 * base_n),
        _ => {
            return Err(Error::UnsupportedPredicate {
                predicate: p.name().to_string(),
                family: "single-set",
            })
        }
    };
    Ok(t)
}

/// `(f^1_P, f^2_P, f^3_P)` for the predicates equal to half a sum of three cuts.
pub fn map_set_triple(
    p: Predicate,
    s: &VertexSet,
    base_n: usize,
) -> Result<(VertexSet, VertexSet, VertexSet)> {
    check_universe(s, base_n)?;
    let sc = s.complement();
    // (positive part, negative part) for the first two sets; the third is their union.
    let (pos, neg) = match p {
        Predicate::OR => (s, s),
        Predicate::NAND => (&sc, &sc),
        Predicate::N10 => (&sc, s),
        Predicate::N01 => (s, &sc),
        _ => {
            return Err(Error::UnsupportedPredicate {
                predicate: p.name().to_string(),
                family: "triple-set",
            })
        }
    };
    Ok((
        cover_set(base_n, Some(pos), None),
        cover_set(base_n, None, Some(neg)),
        cover_set(base_n, Some(pos), Some(neg)),
    ))
}

/// `f_P` with `And_H(S) = P_{γ(H)}(f_P(S))`, for the single-one predicates.
pub fn map_set_and_family(p: Predicate, s: &VertexSet, base_n: usize) -> Result<VertexSet> {
    check_universe(s, base_n)?;
    let sc = s.complement();
    let t = match p {
        Predicate::AND => cover_set(base_n, Some(s), Some(s)),
        Predicate::NOR => cover_set(base_n, Some(&sc), Some(&sc)),
        Predicate::DICUT => cover_set(base_n, Some(s), Some(&sc)),
        Predicate::ZERO_ONE => cover_set(base_n, Some(&sc), Some(s)),
        _ => {
            return Err(Error::UnsupportedPredicate {
                predicate: p.name().to_string(),
                family: "And-family",
            })
        }
    };
    Ok(t)
}
