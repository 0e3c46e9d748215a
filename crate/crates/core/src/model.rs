//! VCSP instances, weighted digraphs and vertex sets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predicate::Predicate;

/// A boolean assignment, one entry per variable.
pub type Assignment = Vec<bool>;

/// A subset of `{0, .., n-1}` stored as a packed bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        Self::empty(n).complement()
    }

    /// Set whose members are the set bits of `mask`. Requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "from_mask supports at most 64 vertices");
        let mut s = Self::empty(n);
        if n > 0 {
            s.words[0] = mask & low_bits(n);
        }
        s
    }

    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// `S_A = {u | A(u) = 1}`.
    pub fn from_assignment(a: &[bool]) -> Self {
        Self::from_indices(a.len(), a.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn to_assignment(&self) -> Assignment {
        (0..self.n).map(|v| self.contains(v)).collect()
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe of size {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            let rem = self.n % 64;
            if rem != 0 {
                *last &= low_bits(rem);
            }
        }
        VertexSet { n: self.n, words }
    }

    pub fn union(&self, other: &VertexSet) -> Self {
        assert_eq!(self.n, other.n, "union of sets over different universes");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        VertexSet { n: self.n, words }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A weighted constraint `P(A(u), A(v))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    pub predicate: Predicate,
    pub weight: f64,
}

impl Constraint {
    pub fn new(u: usize, v: usize, predicate: Predicate, weight: f64) -> Self {
        Constraint {
            u,
            v,
            predicate,
            weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct VcspInstance {
    n: usize,
    constraints: Vec<Constraint>,
}

impl VcspInstance {
    /// Validates and normalizes the constraint list. Zero-weight constraints
    /// are dropped; parallel constraints are kept distinct.
    pub fn new(n: usize, constraints: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        let mut kept = Vec::new();
        for (index, c) in constraints.into_iter().enumerate() {
            if !(c.weight.is_finite() && c.weight >= 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: c.weight,
                });
            }
            for var in [c.u, c.v] {
                if var >= n {
                    return Err(Error::IndexOutOfRange { index, var, n });
                }
            }
            if c.weight > 0.0 {
                kept.push(c);
            }
        }
        Ok(VcspInstance {
            n,
            constraints: kept,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.constraints.iter().map(|c| c.weight).fold(0.0, |s, w| s + w)
    }

    /// `Val(A) = Σ w·P(A(u), A(v))`.
    pub fn value(&self, a: &[bool]) -> f64 {
        assert_eq!(a.len(), self.n, "assignment length must equal variable count");
        self.constraints
            .iter()
            .filter(|c| c.predicate.eval(a[c.u], a[c.v]))
            .map(|c| c.weight)
            .fold(0.0, |s, w| s + w)
    }

    /// Value of the assignment whose true variables are the set bits of `mask`.
    pub fn value_mask(&self, mask: u64) -> f64 {
        self.constraints
            .iter()
            .filter(|c| c.predicate.eval(mask >> c.u & 1 == 1, mask >> c.v & 1 == 1))
            .map(|c| c.weight)
            .fold(0.0, |s, w| s + w)
    }

    /// Digraph view of a single-predicate instance: one edge per constraint.
    pub fn to_digraph(&self, p: Predicate) -> Result<WeightedDigraph> {
        if let Some((index, c)) = self
            .constraints
            .iter()
            .enumerate()
            .find(|(_, c)| c.predicate != p)
        {
            return Err(Error::MixedPredicates {
                expected: p.name().to_string(),
                found: c.predicate.name().to_string(),
                index,
            });
        }
        WeightedDigraph::new(
            self.n,
            self.constraints.iter().map(|c| Edge::new(c.u, c.v, c.weight)),
        )
    }

    /// Splits the instance into single-predicate sub-instances, keyed in
    /// canonical predicate order.
    pub fn partition_by_predicate(&self) -> BTreeMap<Predicate, VcspInstance> {
        let mut parts: BTreeMap<Predicate, VcspInstance> = BTreeMap::new();
        for c in &self.constraints {
            parts
                .entry(c.predicate)
                .or_insert_with(|| VcspInstance {
                    n: self.n,
                    constraints: Vec::new(),
                })
                .constraints
                .push(*c);
        }
        parts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Edge { src, dst, weight }
    }
}

/// Directed multigraph with strictly positive edge weights. Self-loops and
/// parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedDigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        for (index, e) in edges.iter().enumerate() {
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: e.weight,
                });
            }
            for var in [e.src, e.dst] {
                if var >= n {
                    return Err(Error::IndexOutOfRange { index, var, n });
                }
            }
        }
        Ok(WeightedDigraph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        WeightedDigraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, |s, w| s + w)
    }

    /// `P_G(S) = Σ_{(v,u)∈E} P(1_S(v), 1_S(u))·w(v,u)`.
    pub fn predicate_value(&self, p: Predicate, s: &VertexSet) -> f64 {
        self.edges
            .iter()
            .filter(|e| p.eval(s.contains(e.src), s.contains(e.dst)))
            .map(|e| e.weight)
            .fold(0.0, |s, w| s + w)
    }

    /// [`predicate_value`](Self::predicate_value) with `S` given as a bitmask.
    pub fn predicate_value_mask(&self, p: Predicate, mask: u64) -> f64 {
        self.edges
            .iter()
            .filter(|e| p.eval(mask >> e.src & 1 == 1, mask >> e.dst & 1 == 1))
            .map(|e| e.weight)
            .fold(0.0, |s, w| s + w)
    }

    /// Interprets the graph as a single-predicate instance.
    pub fn to_instance(&self, p: Predicate) -> VcspInstance {
        VcspInstance {
            n: self.n,
            constraints: self
                .edges
                .iter()
                .map(|e| Constraint::new(e.src, e.dst, p, e.weight))
                .collect(),
        }
    }

    /// Weighted degree of every vertex, ignoring direction. A self-loop adds
    /// twice its weight.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.src] += e.weight;
            deg[e.dst] += e.weight;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_instance_examples() {
        let inst = VcspInstance::new(2, [Constraint::new(0, 1, Predicate::CUT, 1.0)]).unwrap();
        assert_eq!(inst.len(), 1);
        let inst = VcspInstance::new(2, [Constraint::new(0, 1, Predicate::OR, 0.0)]).unwrap();
        assert!(inst.is_empty());
        assert!(matches!(
            VcspInstance::new(1, [Constraint::new(0, 2, Predicate::CUT, 1.0)]),
            Err(Error::IndexOutOfRange { var: 2, .. })
        ));
        assert!(matches!(
            VcspInstance::new(2, [Constraint::new(0, 1, Predicate::CUT, -1.0)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(VcspInstance::new(2, [Constraint::new(0, 1, Predicate::CUT, f64::NAN)]).is_err());
    }

    #[test]
    fn value_examples() {
        let inst = VcspInstance::new(2, [Constraint::new(0, 1, Predicate::AND, 5.0)]).unwrap();
        assert_eq!(inst.value(&[true, true]), 5.0);
        assert_eq!(inst.value(&[true, false]), 0.0);
        let inst = VcspInstance::new(
            3,
            [
                Constraint::new(0, 1, Predicate::CUT, 1.0),
                Constraint::new(1, 2, Predicate::UNCUT, 2.0),
            ],
        )
        .unwrap();
        assert_eq!(inst.value(&[false, true, true]), 3.0);
        assert_eq!(inst.value_mask(0b110), 3.0);
    }

    #[test]
    fn to_digraph_examples() {
        let inst = VcspInstance::new(2, [Constraint::new(0, 1, Predicate::CUT, 2.0)]).unwrap();
        let g = inst.to_digraph(Predicate::CUT).unwrap();
        assert_eq!(g.edges(), &[Edge::new(0, 1, 2.0)]);

        let inst = VcspInstance::new(
            2,
            [
                Constraint::new(0, 1, Predicate::OR, 1.0),
                Constraint::new(0, 1, Predicate::OR, 3.0),
            ],
        )
        .unwrap();
        assert_eq!(inst.to_digraph(Predicate::OR).unwrap().m(), 2);

        let mixed = VcspInstance::new(
            2,
            [
                Constraint::new(0, 1, Predicate::OR, 1.0),
                Constraint::new(0, 1, Predicate::CUT, 3.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            mixed.to_digraph(Predicate::OR),
            Err(Error::MixedPredicates { index: 1, .. })
        ));
    }

    #[test]
    fn predicate_value_examples() {
        let tri = WeightedDigraph::new(
            3,
            [Edge::new(0, 1, 1.0), Edge::new(1, 2, 2.0), Edge::new(2, 0, 4.0)],
        )
        .unwrap();
        assert_eq!(tri.predicate_value(Predicate::CUT, &VertexSet::from_indices(3, [0])), 5.0);
        assert_eq!(tri.predicate_value(Predicate::OR, &VertexSet::empty(3)), 0.0);
        let g = WeightedDigraph::new(2, [Edge::new(0, 1, 5.0)]).unwrap();
        assert_eq!(g.predicate_value(Predicate::AND, &VertexSet::full(2)), 5.0);
    }

    #[test]
    fn partition_examples() {
        let inst = VcspInstance::new(
            3,
            [
                Constraint::new(0, 1, Predicate::CUT, 1.0),
                Constraint::new(1, 2, Predicate::OR, 2.0),
            ],
        )
        .unwrap();
        let parts = inst.partition_by_predicate();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Predicate::CUT].len(), 1);
        assert_eq!(parts[&Predicate::OR].len(), 1);
        assert!(VcspInstance::default().partition_by_predicate().is_empty());
    }

    #[test]
    fn vertex_set_ops() {
        let s = VertexSet::from_indices(70, [0, 5, 69]);
        assert_eq!(s.len(), 3);
        let c = s.complement();
        assert_eq!(c.len(), 67);
        assert!(!c.contains(69) && c.contains(68));
        assert_eq!(s.union(&c), VertexSet::full(70));
        assert!(VertexSet::empty(0).complement().is_empty());
        let a = vec![true, false, true];
        assert_eq!(VertexSet::from_assignment(&a).to_assignment(), a);
        assert_eq!(VertexSet::from_mask(3, 0b101), VertexSet::from_assignment(&a));
    }
}
