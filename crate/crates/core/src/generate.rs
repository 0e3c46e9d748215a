//! Seeded random instances for tests, demos and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::applications::hypergraph::{Hyperedge, Hypergraph};
use crate::applications::ksat::{Clause, KSatFormula};
use crate::applications::twolin::{LinearEquation, TwoLinSystem};
use crate::applications::twosat::{TwoSatClause, TwoSatFormula};
use crate::applications::Literal;
use crate::model::{Constraint, Edge, VcspInstance, WeightedDigraph};
use crate::predicate::Predicate;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

/// `m` edges between distinct endpoints, chosen uniformly with repetition.
pub fn random_digraph(rng: &mut impl Rng, n: usize, m: usize, lo: f64, hi: f64) -> WeightedDigraph {
    assert!(n >= 2 || m == 0, "need two vertices for a loop-free edge");
    let edges: Vec<Edge> = (0..m)
        .map(|_| {
            let src = rng.gen_range(0..n);
            let mut dst = rng.gen_range(0..n - 1);
            if dst >= src {
                dst += 1;
            }
            Edge::new(src, dst, weight(rng, lo, hi))
        })
        .collect();
    WeightedDigraph::new(n, edges).expect("generated graph is valid")
}

/// Digraph with no self-loops, parallel or anti-parallel edges. `m` is
/// capped at `n(n−1)/2`.
pub fn random_strongly_asymmetric(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    lo: f64,
    hi: f64,
) -> WeightedDigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let edges: Vec<Edge> = pairs
        .into_iter()
        .take(m)
        .map(|(u, v)| {
            let w = weight(rng, lo, hi);
            if rng.gen_bool(0.5) {
                Edge::new(u, v, w)
            } else {
                Edge::new(v, u, w)
            }
        })
        .collect();
    WeightedDigraph::new(n, edges).expect("generated graph is valid")
}

/// Instance mixing the given predicates uniformly.
pub fn random_instance(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    predicates: &[Predicate],
) -> VcspInstance {
    let g = random_digraph(rng, n, m, 0.1, 10.0);
    let constraints: Vec<Constraint> = g
        .edges()
        .iter()
        .map(|e| {
            let p = *predicates.choose(rng).expect("at least one predicate");
            Constraint::new(e.src, e.dst, p, e.weight)
        })
        .collect();
    VcspInstance::new(n, constraints).expect("generated instance is valid")
}

fn random_literal(rng: &mut impl Rng, n: usize) -> Literal {
    Literal {
        var: rng.gen_range(0..n),
        negated: rng.gen_bool(0.5),
    }
}

/// Clauses over two distinct variables.
pub fn random_2sat(rng: &mut impl Rng, n: usize, m: usize) -> TwoSatFormula {
    let clauses = (0..m)
        .map(|_| {
            let a = random_literal(rng, n);
            let mut b = random_literal(rng, n - 1);
            if b.var >= a.var {
                b.var += 1;
            }
            TwoSatClause {
                a,
                b,
                weight: weight(rng, 0.1, 10.0),
            }
        })
        .collect();
    TwoSatFormula::new(n, clauses).expect("generated formula is valid")
}

pub fn random_2lin(rng: &mut impl Rng, n: usize, m: usize) -> TwoLinSystem {
    let g = random_digraph(rng, n, m, 0.1, 10.0);
    let equations = g
        .edges()
        .iter()
        .map(|e| LinearEquation {
            u: e.src,
            v: e.dst,
            rhs: rng.gen_bool(0.5),
            weight: e.weight,
        })
        .collect();
    TwoLinSystem::new(n, equations).expect("generated system is valid")
}

/// Clauses of exactly `k` literals over distinct variables.
pub fn random_ksat(rng: &mut impl Rng, n: usize, m: usize, k: usize) -> KSatFormula {
    assert!(k <= n, "clause width exceeds variable count");
    let vars: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| Clause {
            literals: vars
                .choose_multiple(rng, k)
                .map(|&var| Literal {
                    var,
                    negated: rng.gen_bool(0.5),
                })
                .collect(),
            weight: weight(rng, 0.1, 10.0),
        })
        .collect();
    KSatFormula::new(n, clauses).expect("generated formula is valid")
}

/// `m` distinct `r`-uniform hyperedges.
pub fn random_uniform_hypergraph(rng: &mut impl Rng, n: usize, m: usize, r: usize) -> Hypergraph {
    let vars: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::new();
    let mut hyperedges = Vec::with_capacity(m);
    let mut attempts = 0;
    while hyperedges.len() < m && attempts < 100 * m.max(1) {
        attempts += 1;
        let mut vs: Vec<usize> = vars.choose_multiple(rng, r).copied().collect();
        vs.sort_unstable();
        if seen.insert(vs.clone()) {
            hyperedges.push(Hyperedge {
                vertices: vs,
                weight: weight(rng, 0.1, 10.0),
            });
        }
    }
    Hypergraph::new(n, hyperedges).expect("generated hypergraph is valid")
}
