//! k-way cuts.

use crate::error::{Error, Result};
use crate::model::{VertexSet, WeightedDigraph};
use crate::predicate::Predicate;

/// Block index of every vertex, checking that `blocks` partitions `0..n`.
pub fn block_labels(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if label[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} in two blocks")));
            }
            label[v] = b;
        }
    }
    if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} uncovered")));
    }
    Ok(label)
}

/// Total weight of edges whose endpoints lie in different blocks.
pub fn k_cut_value(g: &WeightedDigraph, blocks: &[Vec<usize>]) -> Result<f64> {
    let label = block_labels(g.n(), blocks)?;
    Ok(g.edges()
        .iter()
        .filter(|e| label[e.src] != label[e.dst])
        .map(|e| e.weight)
        .fold(0.0, |s, w| s + w))
}

/// `½ Σ_a Cut(S_a)`, the double-counting form of [`k_cut_value`].
pub fn k_cut_by_double_counting(g: &WeightedDigraph, blocks: &[Vec<usize>]) -> Result<f64> {
    block_labels(g.n(), blocks)?;
    let total: f64 = blocks
        .iter()
        .map(|b| g.predicate_value(Predicate::CUT, &VertexSet::from_indices(g.n(), b.iter().copied())))
        .fold(0.0, |s, w| s + w);
    Ok(0.5 * total)
}

/// All partitions of `0..n` into at most `k` nonempty blocks, as restricted
/// growth strings.
pub fn partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, k: usize, labels: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let mut blocks = vec![Vec::new(); used];
            for (v, &l) in labels.iter().enumerate() {
                blocks[l].push(v);
            }
            out.push(blocks);
            return;
        }
        for l in 0..(used + 1).min(k) {
            labels.push(l);
            rec(i + 1, n, k, labels, used.max(l + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 || n == 0 {
        rec(0, n, k, &mut Vec::new(), 0, &mut out);
    }
    out
}
