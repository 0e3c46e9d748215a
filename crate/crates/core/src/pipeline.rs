//! End-to-end sparsification of VCSP instances.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut_sparsify::{sample_edges, subgraph, QuadraticFormKind, Reweighted, SamplerConfig};
use crate::double_cover::{gamma, pull_back, DoubleCoverGraph};
use crate::error::{Error, Result};
use crate::model::{Constraint, Edge, VcspInstance, WeightedDigraph};
use crate::oracle::VerificationResult;
use crate::predicate::{Predicate, SparsifiabilityClass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub name: String,
    pub class: SparsifiabilityClass,
    pub in_count: usize,
    pub out_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsifyReport {
    pub eps: f64,
    pub seed: u64,
    pub classes: Vec<ClassReport>,
    pub total_in: usize,
    pub total_out: usize,
    pub verified: Option<VerificationResult>,
}

/// Exact sparsifier for predicates that ignore at least one endpoint.
pub fn trivial_sparsifier(g: &WeightedDigraph, p: Predicate) -> Result<WeightedDigraph> {
    Ok(subgraph(g, &trivial_edges(g, p)?))
}

pub(crate) fn trivial_edges(g: &WeightedDigraph, p: Predicate) -> Result<Vec<Reweighted>> {
    if p.classify() != SparsifiabilityClass::SparsifiableTrivial {
        return Err(Error::UnsupportedPredicate {
            predicate: p.name().to_string(),
            family: "trivial",
        });
    }
    let kept = match p {
        Predicate::ZERO => Vec::new(),
        Predicate::ONE if g.m() == 0 => Vec::new(),
        Predicate::ONE => vec![Reweighted {
            index: 0,
            weight: g.total_weight(),
        }],
        Predicate::ZERO_X | Predicate::ONE_X => aggregate_by(g, |e| e.src),
        Predicate::X_ZERO | Predicate::X_ONE => aggregate_by(g, |e| e.dst),
        _ => unreachable!("classified trivial"),
    };
    Ok(kept)
}

/// One representative edge per key, in order of first appearance, carrying
/// the total weight of all edges sharing that key.
fn aggregate_by(g: &WeightedDigraph, key: impl Fn(&Edge) -> usize) -> Vec<Reweighted> {
    let mut slot = vec![usize::MAX; g.n()];
    let mut kept: Vec<Reweighted> = Vec::new();
    for (index, e) in g.edges().iter().enumerate() {
        let k = key(e);
        if slot[k] == usize::MAX {
            slot[k] = kept.len();
            kept.push(Reweighted { index, weight: 0.0 });
        }
        kept[slot[k]].weight += e.weight;
    }
    kept
}

/// Sparsifies the graph of a single predicate. For nontrivial predicates the
/// result does not depend on `p`.
pub fn sparsify_predicate_graph(
    g: &WeightedDigraph,
    p: Predicate,
    cfg: &SamplerConfig,
) -> Result<(WeightedDigraph, SparsifiabilityClass)> {
    let class = p.classify();
    let out = match class {
        SparsifiabilityClass::SparsifiableTrivial => trivial_sparsifier(g, p)?,
        SparsifiabilityClass::NonSparsifiable => g.clone(),
        SparsifiabilityClass::SparsifiableNontrivial => {
            let cover = gamma(g);
            let kept = sample_edges(cover.graph(), QuadraticFormKind::Laplacian, cfg)?;
            let sparse_cover = DoubleCoverGraph::from_graph(g.n(), subgraph(cover.graph(), &kept))?;
            pull_back(&sparse_cover)?
        }
    };
    Ok((out, class))
}

pub(crate) fn predicate_edges(
    g: &WeightedDigraph,
    p: Predicate,
    cfg: &SamplerConfig,
) -> Result<Vec<Reweighted>> {
    match p.classify() {
        SparsifiabilityClass::SparsifiableTrivial => trivial_edges(g, p),
        SparsifiabilityClass::NonSparsifiable => Ok(g
            .edges()
            .iter()
            .enumerate()
            .map(|(index, e)| Reweighted {
                index,
                weight: e.weight,
            })
            .collect()),
        // γ maps edges one-to-one, so cover indices are base indices.
        SparsifiabilityClass::SparsifiableNontrivial => {
            sample_edges(gamma(g).graph(), QuadraticFormKind::Laplacian, cfg)
        }
    }
}

/// Seed for one predicate class, derived from the master seed and the
/// predicate's truth table.
pub fn derive_seed(master: u64, p: Predicate) -> u64 {
    splitmix64(master ^ splitmix64(0x5350_4152_5349_4659 ^ u64::from(p.table())))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Surviving constraints of `inst`, as indices into its constraint list in
/// increasing order, plus the per-class report entries.
pub fn sparsify_instance_indexed(
    inst: &VcspInstance,
    cfg: &SamplerConfig,
) -> Result<(Vec<Reweighted>, Vec<ClassReport>)> {
    cfg.validate()?;
    let mut classes: BTreeMap<Predicate, Vec<usize>> = BTreeMap::new();
    for (i, c) in inst.constraints().iter().enumerate() {
        classes.entry(c.predicate).or_default().push(i);
    }
    let per_class: Vec<(Vec<Reweighted>, ClassReport)> = classes
        .into_par_iter()
        .map(|(p, indices)| {
            let edges = indices.iter().map(|&i| {
                let c = inst.constraints()[i];
                Edge::new(c.u, c.v, c.weight)
            });
            let g = WeightedDigraph::new(inst.n(), edges)?;
            let class_cfg = cfg.with_seed(derive_seed(cfg.seed, p));
            let kept: Vec<Reweighted> = predicate_edges(&g, p, &class_cfg)?
                .into_iter()
                .map(|r| Reweighted {
                    index: indices[r.index],
                    weight: r.weight,
                })
                .collect();
            let report = ClassReport {
                name: p.name().to_string(),
                class: p.classify(),
                in_count: indices.len(),
                out_count: kept.len(),
            };
            Ok((kept, report))
        })
        .collect::<Result<_>>()?;
    let mut kept = Vec::new();
    let mut reports = Vec::new();
    for (k, r) in per_class {
        kept.extend(k);
        reports.push(r);
    }
    kept.sort_by_key(|r| r.index);
    Ok((kept, reports))
}

pub fn sparsify_instance(
    inst: &VcspInstance,
    cfg: &SamplerConfig,
) -> Result<(VcspInstance, SparsifyReport)> {
    let (kept, classes) = sparsify_instance_indexed(inst, cfg)?;
    let constraints = kept.iter().map(|r| {
        let c = inst.constraints()[r.index];
        Constraint::new(c.u, c.v, c.predicate, r.weight)
    });
    let out = VcspInstance::new(inst.n(), constraints)?;
    let report = SparsifyReport {
        eps: cfg.eps,
        seed: cfg.seed,
        total_in: inst.len(),
        total_out: out.len(),
        classes,
        verified: None,
    };
    Ok((out, report))
}
