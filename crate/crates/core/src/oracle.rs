//! Brute-force ground truth.
//!
//! Everything here enumerates all `2^n` subsets or assignments. Nothing is
//! sampled; tolerances only absorb floating-point summation noise.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cut_sparsify::{quadratic_form, QuadraticFormKind, SignVector};
use crate::double_cover::{gamma, map_set_and_family, map_set_single, map_set_triple};
use crate::error::{Error, Result};
use crate::model::{Assignment, VcspInstance, VertexSet, WeightedDigraph};
use crate::predicate::Predicate;

pub const ENUMERATION_CAP: usize = 24;

/// Absolute tolerance for exact identities, scaled by total weight.
pub fn identity_tolerance(total_weight: f64) -> f64 {
    1e-9 * total_weight.max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub max_rel_error: f64,
    pub witness: Option<Assignment>,
    pub zero_mismatch: bool,
}

impl VerificationResult {
    pub fn within(&self, eps: f64) -> bool {
        !self.zero_mismatch && self.max_rel_error <= eps
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn mask_to_assignment(n: usize, mask: u64) -> Assignment {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Compares `sparsified` to `original` on every mask in `0..2^n`.
///
/// The relative error at a mask is `|a − b| / b` with `b` the original value.
/// Where exactly one of the two values is zero the result reports a zero
/// mismatch, and the first such mask becomes the witness.
pub fn exhaustive_max_error<F, G>(n: usize, original: F, sparsified: G) -> Result<VerificationResult>
where
    F: Fn(u64) -> f64 + Sync,
    G: Fn(u64) -> f64 + Sync,
{
    check_cap(n)?;
    // (zero mismatch, relative error, mask); larger is worse, ties go to the smaller mask
    type Score = (bool, f64, u64);
    let worse = |p: &Score, q: &Score| {
        (p.0, p.1) > (q.0, q.1) || ((p.0, p.1) == (q.0, q.1) && p.2 < q.2)
    };
    let (zero_mismatch, worst_err, worst_mask, max_rel_error) = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let b = original(mask);
            let a = sparsified(mask);
            let err = if b == 0.0 { 0.0 } else { (a - b).abs() / b };
            ((a == 0.0) != (b == 0.0), err, mask, err)
        })
        .reduce(
            || (false, 0.0, u64::MAX, 0.0),
            |x, y| {
                let max_err = x.3.max(y.3);
                let pick = if worse(&(x.0, x.1, x.2), &(y.0, y.1, y.2)) { x } else { y };
                (pick.0, pick.1, pick.2, max_err)
            },
        );
    let witness =
        (zero_mismatch || worst_err > 0.0).then(|| mask_to_assignment(n, worst_mask));
    Ok(VerificationResult {
        max_rel_error,
        witness,
        zero_mismatch,
    })
}

pub fn verify_instances(original: &VcspInstance, sparsified: &VcspInstance) -> Result<VerificationResult> {
    if original.n() != sparsified.n() {
        return Err(Error::DimensionMismatch {
            expected: original.n(),
            got: sparsified.n(),
        });
    }
    exhaustive_max_error(
        original.n(),
        |m| original.value_mask(m),
        |m| sparsified.value_mask(m),
    )
}

pub fn verify_graphs(
    original: &WeightedDigraph,
    sparsified: &WeightedDigraph,
    p: Predicate,
) -> Result<VerificationResult> {
    if original.n() != sparsified.n() {
        return Err(Error::DimensionMismatch {
            expected: original.n(),
            got: sparsified.n(),
        });
    }
    exhaustive_max_error(
        original.n(),
        |m| original.predicate_value_mask(p, m),
        |m| sparsified.predicate_value_mask(p, m),
    )
}

/// Set mappings into the double cover, abstracted so corrupted mappings can
/// be fed to [`check_reduction_identities_with`].
pub trait CoverMaps {
    fn single(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<VertexSet>;
    fn triple(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<(VertexSet, VertexSet, VertexSet)>;
    fn and_family(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<VertexSet>;
}

pub struct StandardMaps;

impl CoverMaps for StandardMaps {
    fn single(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<VertexSet> {
        map_set_single(p, s, n)
    }

    fn triple(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<(VertexSet, VertexSet, VertexSet)> {
        map_set_triple(p, s, n)
    }

    fn and_family(&self, p: Predicate, s: &VertexSet, n: usize) -> Result<VertexSet> {
        map_set_and_family(p, s, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityFamily {
    SingleSet,
    TripleSet,
    AndFamily,
}

impl IdentityFamily {
    pub fn of(p: Predicate) -> Self {
        match p {
            Predicate::OR | Predicate::NAND | Predicate::N10 | Predicate::N01 => {
                IdentityFamily::TripleSet
            }
            Predicate::AND | Predicate::NOR | Predicate::DICUT | Predicate::ZERO_ONE => {
                IdentityFamily::AndFamily
            }
            _ => IdentityFamily::SingleSet,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityViolation {
    pub predicate: Predicate,
    pub set: VertexSet,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    /// `(predicate, family, subsets checked)` for all sixteen predicates.
    pub checked: Vec<(Predicate, IdentityFamily, usize)>,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_reduction_identities(g: &WeightedDigraph) -> Result<IdentityReport> {
    check_reduction_identities_with(g, &StandardMaps)
}

/// Checks, for every predicate and every subset `S`, the cover identity of
/// the predicate's family.
pub fn check_reduction_identities_with(
    g: &WeightedDigraph,
    maps: &dyn CoverMaps,
) -> Result<IdentityReport> {
    let n = g.n();
    check_cap(n)?;
    let cover = gamma(g);
    let cg = cover.graph();
    let tol = identity_tolerance(g.total_weight());
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    for p in Predicate::all() {
        let family = IdentityFamily::of(p);
        for mask in 0..1u64 << n {
            let s = VertexSet::from_mask(n, mask);
            let (lhs, rhs) = match family {
                IdentityFamily::SingleSet => (
                    g.predicate_value(p, &s),
                    cg.predicate_value(Predicate::CUT, &maps.single(p, &s, n)?),
                ),
                IdentityFamily::TripleSet => {
                    let (a, b, c) = maps.triple(p, &s, n)?;
                    let cut = |t: &VertexSet| cg.predicate_value(Predicate::CUT, t);
                    (g.predicate_value(p, &s), 0.5 * (cut(&a) + cut(&b) + cut(&c)))
                }
                IdentityFamily::AndFamily => (
                    g.predicate_value(Predicate::AND, &s),
                    cg.predicate_value(p, &maps.and_family(p, &s, n)?),
                ),
            };
            if (lhs - rhs).abs() > tol {
                violations.push(IdentityViolation {
                    predicate: p,
                    set: s,
                    lhs,
                    rhs,
                });
            }
        }
        checked.push((p, family, 1usize << n));
    }
    Ok(IdentityReport {
        checked,
        violations,
    })
}

/// First subset violating `Cut(S) = 2·Or(S) − Σ_{v∈S} deg(v)`, using the
/// supplied degree vector.
pub fn or2cut_violation(g: &WeightedDigraph, degrees: &[f64]) -> Result<Option<VertexSet>> {
    let n = g.n();
    check_cap(n)?;
    if degrees.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: degrees.len(),
        });
    }
    let tol = identity_tolerance(g.total_weight());
    Ok((0..1u64 << n).find_map(|mask| {
        let cut = g.predicate_value_mask(Predicate::CUT, mask);
        let or = g.predicate_value_mask(Predicate::OR, mask);
        let deg: f64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| degrees[v]).sum();
        ((cut - (2.0 * or - deg)).abs() > tol).then(|| VertexSet::from_mask(n, mask))
    }))
}

/// The Or-to-Cut identity over all subsets, with weighted degrees.
pub fn check_or2cut(g: &WeightedDigraph) -> Result<bool> {
    Ok(or2cut_violation(g, &g.weighted_degrees())?.is_none())
}

/// First subset violating `φ_Sᵀ U φ_S = 4·unCut(S)`, with the form taken on
/// `form_graph` and the unCut value on `value_graph`.
pub fn uncut_quadratic_violation(
    form_graph: &WeightedDigraph,
    value_graph: &WeightedDigraph,
) -> Result<Option<VertexSet>> {
    let n = value_graph.n();
    check_cap(n)?;
    let tol = 4.0 * identity_tolerance(value_graph.total_weight());
    for mask in 0..1u64 << n {
        let s = VertexSet::from_mask(n, mask);
        let phi = SignVector::from_set(&s);
        let q = quadratic_form(form_graph, QuadraticFormKind::NegatedLaplacian, phi.as_slice())?;
        let u = value_graph.predicate_value(Predicate::UNCUT, &s);
        if (q - 4.0 * u).abs() > tol {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn check_uncut_quadratic(g: &WeightedDigraph) -> Result<bool> {
    Ok(uncut_quadratic_violation(g, g)?.is_none())
}

/// Evidence that a candidate sparsifier of an And graph drops an edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AndWitness {
    pub u: usize,
    pub v: usize,
    pub original_value: f64,
    pub candidate_value: f64,
}

pub fn is_strongly_asymmetric(g: &WeightedDigraph) -> bool {
    let pairs: HashSet<(usize, usize)> = g.edges().iter().map(|e| (e.src, e.dst)).collect();
    g.edges()
        .iter()
        .all(|e| e.src != e.dst && !pairs.contains(&(e.dst, e.src)))
}

/// Returns `S = {u, v}` for the first edge `(u, v)` of `g` that `candidate`
/// lacks. On such a set `And_G(S) = w(u,v) > 0` while the candidate's value
/// is whatever it keeps between `u` and `v`, which is zero for any subgraph.
pub fn and_completeness_check(
    g: &WeightedDigraph,
    candidate: &WeightedDigraph,
) -> Result<Option<AndWitness>> {
    if !is_strongly_asymmetric(g) {
        return Err(Error::NotStronglyAsymmetric(
            "contains a self-loop or an anti-parallel pair".to_string(),
        ));
    }
    if candidate.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: candidate.n(),
        });
    }
    let present: HashSet<(usize, usize)> =
        candidate.edges().iter().map(|e| (e.src, e.dst)).collect();
    Ok(g
        .edges()
        .iter()
        .find(|e| !present.contains(&(e.src, e.dst)))
        .map(|e| {
            let s = VertexSet::from_indices(g.n(), [e.src, e.dst]);
            AndWitness {
                u: e.src,
                v: e.dst,
                original_value: g.predicate_value(Predicate::AND, &s),
                candidate_value: candidate.predicate_value(Predicate::AND, &s),
            }
        }))
}
