//! The `x + y ≡ a (mod k)` predicate and why it cannot be sparsified.
//!
//! For `k ≥ 3` there is a triple `(x, y, z)` with `x + y ≡ a` while `z + x`,
//! `z + y` and `2z` all differ from `a`. Assigning `x` and `y` to the
//! endpoints of one edge and `z` to every other vertex satisfies that edge
//! alone, so any sparsifier has to keep every edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WeightedDigraph;

/// First witness triple in lexicographic order.
pub fn sum_mod_k_witness(k: usize, a: usize) -> Result<(usize, usize, usize)> {
    if k < 3 {
        return Err(Error::AlphabetTooSmall(k));
    }
    if a >= k {
        return Err(Error::ResidueOutOfRange { a, k });
    }
    for x in 0..k {
        for y in 0..k {
            if (x + y) % k != a {
                continue;
            }
            for z in 0..k {
                if (z + x) % k != a && (z + y) % k != a && (2 * z) % k != a {
                    return Ok((x, y, z));
                }
            }
        }
    }
    unreachable!("a witness exists for every k ≥ 3")
}

/// Total weight of edges `(u, v)` with `A(u) + A(v) ≡ a (mod k)`.
pub fn sum_value(g: &WeightedDigraph, k: usize, a: usize, assignment: &[usize]) -> f64 {
    g.edges()
        .iter()
        .filter(|e| (assignment[e.src] + assignment[e.dst]) % k == a)
        .map(|e| e.weight)
        .fold(0.0, |s, w| s + w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumDemo {
    pub assignment: Vec<usize>,
    /// Value of the full graph.
    pub value_full: f64,
    /// Value with the dropped edge removed.
    pub value_without: f64,
}

pub fn demonstrate_sum_nonsparsifiable(
    g: &WeightedDigraph,
    dropped_edge: usize,
    k: usize,
    a: usize,
) -> Result<SumDemo> {
    let (x, y, z) = sum_mod_k_witness(k, a)?;
    let e = *g.edges().get(dropped_edge).ok_or(Error::EdgeOutOfRange {
        index: dropped_edge,
        m: g.m(),
    })?;
    if e.src == e.dst {
        return Err(Error::InvalidEdge(format!(
            "edge {dropped_edge} is a self-loop; its endpoints cannot take x and y"
        )));
    }
    let mut assignment = vec![z; g.n()];
    assignment[e.src] = x;
    assignment[e.dst] = y;
    let rest = WeightedDigraph::new(
        g.n(),
        g.edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != dropped_edge)
            .map(|(_, e)| *e),
    )?;
    Ok(SumDemo {
        value_full: sum_value(g, k, a, &assignment),
        value_without: sum_value(&rest, k, a, &assignment),
        assignment,
    })
}
