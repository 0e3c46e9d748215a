//! Weighted hypergraphs, their cut function, and a sampling sparsifier.
//!
//! A hyperedge `e` is kept with probability
//! `p_e = min(1, c · (r_e + ln(n+1)) · w_e / (κ_e · ε²))` and rescaled by
//! `1/p_e`. Here `κ_e` lower-bounds the weighted connectivity between the
//! vertices of `e` in the clique expansion, where every hyperedge of size
//! `r` adds `w/r` to each pair of its vertices.
//!
//! The bound comes from a packing of maximum spanning forests: forest `F_i`
//! is a maximum spanning forest of what earlier forests left behind. The
//! tree paths between `u` and `v` in different forests are edge-disjoint,
//! so the sum of their bottleneck weights is a feasible flow and therefore
//! at most the `u`-`v` min cut.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cut_sparsify::{edge_uniform, Reweighted, SamplerConfig};
use crate::error::{Error, Result};
use crate::model::VertexSet;

/// Upper limit on forests in the packing; fewer forests give a weaker but
/// still valid lower bound.
pub const MAX_FORESTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Hyperedge>,
}

impl Hypergraph {
    pub fn new(n: usize, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        for (index, h) in hyperedges.iter().enumerate() {
            if !(h.weight.is_finite() && h.weight > 0.0) {
                return Err(Error::InvalidWeight {
                    index,
                    weight: h.weight,
                });
            }
            if h.vertices.is_empty() {
                return Err(Error::InvalidEdge(format!("hyperedge {index} is empty")));
            }
            let mut seen = VertexSet::empty(n);
            for &v in &h.vertices {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index, var: v, n });
                }
                if seen.contains(v) {
                    return Err(Error::InvalidEdge(format!(
                        "hyperedge {index} repeats vertex {v}"
                    )));
                }
                seen.insert(v);
            }
        }
        Ok(Hypergraph { n, hyperedges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn m(&self) -> usize {
        self.hyperedges.len()
    }

    /// Largest hyperedge size.
    pub fn rank(&self) -> usize {
        self.hyperedges.iter().map(|h| h.vertices.len()).max().unwrap_or(0)
    }

    /// Weight of hyperedges `e` with `S ∩ e ∉ {∅, e}`.
    pub fn cut_value(&self, s: &VertexSet) -> f64 {
        self.hyperedges
            .iter()
            .filter(|h| {
                let inside = h.vertices.iter().filter(|&&v| s.contains(v)).count();
                inside != 0 && inside != h.vertices.len()
            })
            .map(|h| h.weight)
            .fold(0.0, |s, w| s + w)
    }

    /// Clique expansion with parallel pairs merged, keyed by `(u, v)`, `u < v`.
    pub fn clique_expansion(&self) -> BTreeMap<(usize, usize), f64> {
        let mut pairs = BTreeMap::new();
        for h in &self.hyperedges {
            let r = h.vertices.len();
            if r < 2 {
                continue;
            }
            let share = h.weight / r as f64;
            for (i, &a) in h.vertices.iter().enumerate() {
                for &b in &h.vertices[i + 1..] {
                    *pairs.entry((a.min(b), a.max(b))).or_insert(0.0) += share;
                }
            }
        }
        pairs
    }
}

pub fn hypergraph_cut_value(h: &Hypergraph, s: &VertexSet) -> f64 {
    h.cut_value(s)
}

/// Adjacency lists of one spanning forest.
type Forest = Vec<Vec<(usize, f64)>>;

fn forest_packing(n: usize, pairs: &BTreeMap<(usize, usize), f64>) -> Vec<Forest> {
    let mut remaining: Vec<((usize, usize), f64)> = pairs.iter().map(|(&k, &w)| (k, w)).collect();
    // heaviest first; BTreeMap order breaks ties
    remaining.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut forests = Vec::new();
    while !remaining.is_empty() && forests.len() < MAX_FORESTS {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut forest: Forest = vec![Vec::new(); n];
        let mut rest = Vec::with_capacity(remaining.len());
        for ((u, v), w) in remaining {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                forest[u].push((v, w));
                forest[v].push((u, w));
            } else {
                rest.push(((u, v), w));
            }
        }
        forests.push(forest);
        remaining = rest;
    }
    forests
}

/// Bottleneck weight from `root` to every vertex of its tree; 0 elsewhere.
fn bottlenecks(forest: &Forest, root: usize) -> Vec<f64> {
    let mut best = vec![0.0; forest.len()];
    let mut visited = vec![false; forest.len()];
    visited[root] = true;
    best[root] = f64::INFINITY;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(v, w) in &forest[u] {
            if !visited[v] {
                visited[v] = true;
                best[v] = best[u].min(w);
                stack.push(v);
            }
        }
    }
    best
}

/// Lower bound on the clique-expansion min cut separating any two vertices
/// of each hyperedge. Singleton hyperedges get `+∞`: no cut splits them.
pub fn connectivity_lower_bounds(h: &Hypergraph) -> Vec<f64> {
    let forests = forest_packing(h.n, &h.clique_expansion());
    h.hyperedges
        .iter()
        .map(|e| {
            if e.vertices.len() < 2 {
                return f64::INFINITY;
            }
            let r = e.vertices.len();
            // pairwise sums over forests
            let mut sums = vec![0.0; r * r];
            for f in &forests {
                for (i, &u) in e.vertices.iter().enumerate() {
                    let b = bottlenecks(f, u);
                    for (j, &v) in e.vertices.iter().enumerate().skip(i + 1) {
                        sums[i * r + j] += b[v];
                    }
                }
            }
            (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .map(|(i, j)| sums[i * r + j])
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn hyperedge_probabilities(h: &Hypergraph, cfg: &SamplerConfig) -> Vec<f64> {
    let ln_n = ((h.n + 1) as f64).ln();
    let eps2 = cfg.eps * cfg.eps;
    h.hyperedges
        .iter()
        .zip(connectivity_lower_bounds(h))
        .map(|(e, kappa)| {
            if !kappa.is_finite() {
                return 1.0;
            }
            let r = e.vertices.len() as f64;
            (cfg.oversample_c * (r + ln_n) * e.weight / (kappa * eps2)).min(1.0)
        })
        .collect()
}

/// Surviving hyperedges in input order.
pub fn sample_hyperedges(h: &Hypergraph, cfg: &SamplerConfig) -> Result<Vec<Reweighted>> {
    cfg.validate()?;
    let probs = hyperedge_probabilities(h, cfg);
    Ok(h.hyperedges
        .iter()
        .zip(probs)
        .enumerate()
        .filter_map(|(index, (e, p))| {
            if p >= 1.0 {
                Some(Reweighted {
                    index,
                    weight: e.weight,
                })
            } else if edge_uniform(cfg.seed, index) < p {
                Some(Reweighted {
                    index,
                    weight: e.weight / p,
                })
            } else {
                None
            }
        })
        .collect())
}

pub fn hypergraph_sparsifier(h: &Hypergraph, cfg: &SamplerConfig) -> Result<Hypergraph> {
    let kept = sample_hyperedges(h, cfg)?;
    Hypergraph::new(
        h.n,
        kept.iter()
            .map(|r| Hyperedge {
                vertices: h.hyperedges[r.index].vertices.clone(),
                weight: r.weight,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn he(vertices: &[usize], weight: f64) -> Hyperedge {
        Hyperedge {
            vertices: vertices.to_vec(),
            weight,
        }
    }

    #[test]
    fn cut_value_examples() {
        let h = Hypergraph::new(4, vec![he(&[1, 2, 3], 2.0)]).unwrap();
        assert_eq!(h.cut_value(&VertexSet::from_indices(4, [1])), 2.0);
        assert_eq!(h.cut_value(&VertexSet::empty(4)), 0.0);
        assert_eq!(h.cut_value(&VertexSet::full(4)), 0.0);
    }

    #[test]
    fn validation() {
        assert!(Hypergraph::new(3, vec![he(&[0, 0], 1.0)]).is_err());
        assert!(Hypergraph::new(3, vec![he(&[0, 3], 1.0)]).is_err());
        assert!(Hypergraph::new(3, vec![he(&[], 1.0)]).is_err());
        assert!(Hypergraph::new(3, vec![he(&[0, 1], 0.0)]).is_err());
    }

    #[test]
    fn single_hyperedge_saturates() {
        let h = Hypergraph::new(5, vec![he(&[0, 2, 4], 3.0)]).unwrap();
        let cfg = SamplerConfig::new(0.9, 1).unwrap();
        assert_eq!(hyperedge_probabilities(&h, &cfg), vec![1.0]);
        assert_eq!(hypergraph_sparsifier(&h, &cfg).unwrap(), h);
    }

    #[test]
    fn connectivity_bound_on_path() {
        // clique expansion: 0-1 weight 1, 1-2 weight 1; connectivity 0↔2 is 1
        let h = Hypergraph::new(3, vec![he(&[0, 1], 2.0), he(&[1, 2], 2.0)]).unwrap();
        assert_eq!(connectivity_lower_bounds(&h), vec![1.0, 1.0]);
    }

    #[test]
    fn connectivity_bound_counts_disjoint_forests() {
        // a 4-cycle of weight-1 pairs has connectivity 2 between neighbours
        let h = Hypergraph::new(
            4,
            vec![he(&[0, 1], 2.0), he(&[1, 2], 2.0), he(&[2, 3], 2.0), he(&[3, 0], 2.0)],
        )
        .unwrap();
        for k in connectivity_lower_bounds(&h) {
            assert!((1.0..=2.0 + 1e-12).contains(&k));
        }
    }
}
