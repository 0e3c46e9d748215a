//! Importance sampling of graph quadratic forms by leverage score.
//!
//! Two forms are supported. The Laplacian `Σ w (x_i − x_j)²` measures cuts
//! on `{0,1}` vectors; the negated (signless) Laplacian `Σ w (x_i + x_j)²`
//! measures four times the uncut weight on `±1` vectors. Each edge `e` is a
//! rank-one term `w_e b_e b_eᵀ` with `b_e = e_i ∓ e_j`, and its leverage is
//! `w_e b_eᵀ M⁺ b_e`. Sampling keeps `e` with probability
//! `p_e = min(1, c · lev_e · ln(n+1) / ε²)` and rescales it by `1/p_e`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, VertexSet, WeightedDigraph};

/// Components up to this size use a dense eigendecomposition in exact mode.
pub const DENSE_LIMIT: usize = 2048;

const CG_RELATIVE_RESIDUAL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadraticFormKind {
    /// Edge term `w·(x_i − x_j)²`.
    Laplacian,
    /// Edge term `w·(x_i + x_j)²`.
    NegatedLaplacian,
}

impl QuadraticFormKind {
    /// Nonzero entries of the edge's incidence column.
    fn column(self, e: &Edge) -> ColumnEntries {
        match self {
            QuadraticFormKind::Laplacian if e.src == e.dst => ColumnEntries::Zero,
            QuadraticFormKind::Laplacian => ColumnEntries::Two((e.src, 1.0), (e.dst, -1.0)),
            QuadraticFormKind::NegatedLaplacian if e.src == e.dst => {
                ColumnEntries::One((e.src, 2.0))
            }
            QuadraticFormKind::NegatedLaplacian => ColumnEntries::Two((e.src, 1.0), (e.dst, 1.0)),
        }
    }
}

#[derive(Clone, Copy)]
enum ColumnEntries {
    Zero,
    One((usize, f64)),
    Two((usize, f64), (usize, f64)),
}

impl ColumnEntries {
    fn entries(self) -> impl Iterator<Item = (usize, f64)> {
        let (a, b) = match self {
            ColumnEntries::Zero => (None, None),
            ColumnEntries::One(a) => (Some(a), None),
            ColumnEntries::Two(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }

    fn dot(self, x: &[f64]) -> f64 {
        self.entries().map(|(i, c)| c * x[i]).sum()
    }
}

/// The `±1` vector `φ_S`: `+1` on members of `S`, `−1` elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct SignVector(Vec<f64>);

impl SignVector {
    pub fn from_set(s: &VertexSet) -> Self {
        SignVector(
            (0..s.universe())
                .map(|v| if s.contains(v) { 1.0 } else { -1.0 })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeverageMode {
    /// Dense pseudo-inverse per component, conjugate gradient above [`DENSE_LIMIT`].
    LeverageExact,
    /// Conjugate-gradient solve per edge.
    LeverageApprox,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub eps: f64,
    pub seed: u64,
    pub oversample_c: f64,
    pub mode: LeverageMode,
}

impl SamplerConfig {
    pub const DEFAULT_OVERSAMPLE: f64 = 8.0;

    pub fn new(eps: f64, seed: u64) -> Result<Self> {
        let cfg = SamplerConfig {
            eps,
            seed,
            oversample_c: Self::DEFAULT_OVERSAMPLE,
            mode: LeverageMode::LeverageExact,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_oversample(mut self, c: f64) -> Result<Self> {
        self.oversample_c = c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: LeverageMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidConfig(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !(self.oversample_c.is_finite() && self.oversample_c > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "oversample_c must be positive, got {}",
                self.oversample_c
            )));
        }
        Ok(())
    }
}

/// Evaluates the quadratic form with edge directions ignored.
pub fn quadratic_form(g: &WeightedDigraph, kind: QuadraticFormKind, x: &[f64]) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|e| {
            let d = kind.column(e).dot(x);
            e.weight * d * d
        })
        .sum())
}

pub fn leverage_scores(g: &WeightedDigraph, kind: QuadraticFormKind) -> Vec<f64> {
    leverage_scores_with(g, kind, LeverageMode::LeverageExact)
}

pub fn leverage_scores_with(
    g: &WeightedDigraph,
    kind: QuadraticFormKind,
    mode: LeverageMode,
) -> Vec<f64> {
    let mut scores = vec![0.0; g.m()];
    for comp in components(g) {
        if comp.edges.is_empty() {
            continue;
        }
        let local = local_graph(g, &comp);
        let dense = mode == LeverageMode::LeverageExact && comp.vertices.len() <= DENSE_LIMIT;
        let comp_scores = if dense {
            dense_leverage(&local, kind)
        } else {
            cg_leverage(&local, kind)
        };
        for (&ei, s) in comp.edges.iter().zip(comp_scores) {
            scores[ei] = s.clamp(0.0, 1.0);
        }
    }
    scores
}

struct Component {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

fn components(g: &WeightedDigraph) -> Vec<Component> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut comps: Vec<Component> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Component {
                vertices: Vec::new(),
                edges: Vec::new(),
            });
        }
        comps[slot[r]].vertices.push(v);
    }
    for (i, e) in g.edges().iter().enumerate() {
        let r = find(&mut parent, e.src);
        comps[slot[r]].edges.push(i);
    }
    comps
}

/// Restriction of `g` to one component, relabelled to `0..k`.
fn local_graph(g: &WeightedDigraph, comp: &Component) -> WeightedDigraph {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in comp.vertices.iter().enumerate() {
        local[v] = i;
    }
    let edges = comp.edges.iter().map(|&i| {
        let e = g.edges()[i];
        Edge::new(local[e.src], local[e.dst], e.weight)
    });
    WeightedDigraph::new(comp.vertices.len(), edges).expect("restriction of a valid graph")
}

fn form_matrix(g: &WeightedDigraph, kind: QuadraticFormKind) -> DMatrix<f64> {
    let k = g.n();
    let mut m = DMatrix::zeros(k, k);
    for e in g.edges() {
        let col: Vec<_> = kind.column(e).entries().collect();
        for &(i, ci) in &col {
            for &(j, cj) in &col {
                m[(i, j)] += e.weight * ci * cj;
            }
        }
    }
    m
}

fn dense_leverage(g: &WeightedDigraph, kind: QuadraticFormKind) -> Vec<f64> {
    let m = form_matrix(g, kind);
    let eig = SymmetricEigen::new(m);
    let max_ev = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let tol = max_ev * 1e-10 * g.n() as f64;
    let k = g.n();
    let mut pinv = DMatrix::zeros(k, k);
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > tol {
            let v = eig.eigenvectors.column(idx);
            pinv += (v * v.transpose()) / lambda;
        }
    }
    g.edges()
        .iter()
        .map(|e| {
            let col: Vec<_> = kind.column(e).entries().collect();
            let mut q = 0.0;
            for &(i, ci) in &col {
                for &(j, cj) in &col {
                    q += ci * cj * pinv[(i, j)];
                }
            }
            e.weight * q
        })
        .collect()
}

fn apply_form(g: &WeightedDigraph, kind: QuadraticFormKind, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for e in g.edges() {
        let col = kind.column(e);
        let d = e.weight * col.dot(x);
        for (i, c) in col.entries() {
            out[i] += c * d;
        }
    }
}

/// Solves `M y = b` by conjugate gradient, starting from zero. `b` lies in
/// the range of `M` for every edge column, so the iteration stays there.
fn conjugate_gradient(g: &WeightedDigraph, kind: QuadraticFormKind, b: &[f64]) -> Vec<f64> {
    let k = b.len();
    let mut x = vec![0.0; k];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut mp = vec![0.0; k];
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    if b_norm == 0.0 {
        return x;
    }
    for _ in 0..(10 * k).max(100) {
        if rr.sqrt() <= CG_RELATIVE_RESIDUAL * b_norm {
            break;
        }
        apply_form(g, kind, &p, &mut mp);
        let pmp: f64 = p.iter().zip(&mp).map(|(a, b)| a * b).sum();
        if pmp <= 0.0 {
            break;
        }
        let alpha = rr / pmp;
        for i in 0..k {
            x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        for i in 0..k {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    x
}

fn cg_leverage(g: &WeightedDigraph, kind: QuadraticFormKind) -> Vec<f64> {
    g.edges()
        .par_iter()
        .map(|e| {
            let col = kind.column(e);
            let mut b = vec![0.0; g.n()];
            for (i, c) in col.entries() {
                b[i] += c;
            }
            let y = conjugate_gradient(g, kind, &b);
            e.weight * col.dot(&y)
        })
        .collect()
}

/// A surviving edge: index into the input edge list and its new weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reweighted {
    pub index: usize,
    pub weight: f64,
}

/// Uniform draw in `[0, 1)` for one edge, from a stream keyed by `(seed, index)`.
pub fn edge_uniform(seed: u64, index: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.gen::<f64>()
}

pub fn inclusion_probability(leverage: f64, n: usize, cfg: &SamplerConfig) -> f64 {
    let p = cfg.oversample_c * leverage * ((n + 1) as f64).ln() / (cfg.eps * cfg.eps);
    p.min(1.0)
}

/// Samples edges and returns the survivors in input order.
pub fn sample_edges(
    g: &WeightedDigraph,
    kind: QuadraticFormKind,
    cfg: &SamplerConfig,
) -> Result<Vec<Reweighted>> {
    cfg.validate()?;
    let scores = leverage_scores_with(g, kind, cfg.mode);
    let kept = g
        .edges()
        .par_iter()
        .zip(scores.par_iter())
        .enumerate()
        .filter_map(|(index, (e, &lev))| {
            let p = inclusion_probability(lev, g.n(), cfg);
            if p >= 1.0 {
                Some(Reweighted {
                    index,
                    weight: e.weight,
                })
            } else if p > 0.0 && edge_uniform(cfg.seed, index) < p {
                Some(Reweighted {
                    index,
                    weight: e.weight / p,
                })
            } else {
                None
            }
        })
        .collect();
    Ok(kept)
}

/// Re-weighted subgraph of `g`; edge directions are preserved.
pub fn sample_sparsifier(
    g: &WeightedDigraph,
    kind: QuadraticFormKind,
    cfg: &SamplerConfig,
) -> Result<WeightedDigraph> {
    let kept = sample_edges(g, kind, cfg)?;
    Ok(subgraph(g, &kept))
}

pub(crate) fn subgraph(g: &WeightedDigraph, kept: &[Reweighted]) -> WeightedDigraph {
    let edges = kept.iter().map(|r| {
        let e = g.edges()[r.index];
        Edge::new(e.src, e.dst, r.weight)
    });
    WeightedDigraph::new(g.n(), edges).expect("re-weighted subgraph stays valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::Predicate;

    fn unit_triangle() -> WeightedDigraph {
        WeightedDigraph::new(
            3,
            [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(2, 0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn quadratic_form_examples() {
        let g = WeightedDigraph::new(2, [Edge::new(0, 1, 1.0)]).unwrap();
        let neg = QuadraticFormKind::NegatedLaplacian;
        assert_eq!(quadratic_form(&g, neg, &[1.0, -1.0]).unwrap(), 0.0);
        assert_eq!(quadratic_form(&g, neg, &[1.0, 1.0]).unwrap(), 4.0);
        assert_eq!(
            quadratic_form(&g, QuadraticFormKind::Laplacian, &[1.0, 0.0]).unwrap(),
            1.0
        );
        assert!(matches!(
            quadratic_form(&g, neg, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn laplacian_form_is_cut_value() {
        let g = WeightedDigraph::new(
            4,
            [Edge::new(0, 1, 1.5), Edge::new(2, 1, 2.0), Edge::new(3, 3, 4.0), Edge::new(0, 3, 0.5)],
        )
        .unwrap();
        for mask in 0..16u64 {
            let s = VertexSet::from_mask(4, mask);
            let x: Vec<f64> = (0..4).map(|v| if s.contains(v) { 1.0 } else { 0.0 }).collect();
            let q = quadratic_form(&g, QuadraticFormKind::Laplacian, &x).unwrap();
            assert!((q - g.predicate_value(Predicate::CUT, &s)).abs() < 1e-12);
            let phi = SignVector::from_set(&s);
            let u = quadratic_form(&g, QuadraticFormKind::NegatedLaplacian, phi.as_slice()).unwrap();
            assert!((u - 4.0 * g.predicate_value(Predicate::UNCUT, &s)).abs() < 1e-12);
        }
    }

    #[test]
    fn leverage_examples() {
        let g = WeightedDigraph::new(2, [Edge::new(0, 1, 3.0)]).unwrap();
        let s = leverage_scores(&g, QuadraticFormKind::Laplacian);
        assert!((s[0] - 1.0).abs() < 1e-9);

        let s = leverage_scores(&unit_triangle(), QuadraticFormKind::Laplacian);
        for v in &s {
            assert!((v - 2.0 / 3.0).abs() < 1e-9);
        }
        assert!((s.iter().sum::<f64>() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn leverage_self_loops() {
        let g = WeightedDigraph::new(2, [Edge::new(0, 0, 1.0), Edge::new(0, 1, 1.0)]).unwrap();
        let lap = leverage_scores(&g, QuadraticFormKind::Laplacian);
        assert_eq!(lap[0], 0.0);
        assert!((lap[1] - 1.0).abs() < 1e-9);
        // a self-loop makes the signless form full rank: scores sum to 2
        let neg = leverage_scores(&g, QuadraticFormKind::NegatedLaplacian);
        assert!((neg.iter().sum::<f64>() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn cg_matches_dense() {
        let g = WeightedDigraph::new(
            5,
            [
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 2.0),
                Edge::new(2, 0, 0.5),
                Edge::new(2, 3, 3.0),
                Edge::new(3, 4, 1.0),
                Edge::new(4, 2, 1.5),
                Edge::new(4, 4, 0.7),
            ],
        )
        .unwrap();
        for kind in [QuadraticFormKind::Laplacian, QuadraticFormKind::NegatedLaplacian] {
            let a = leverage_scores_with(&g, kind, LeverageMode::LeverageExact);
            let b = leverage_scores_with(&g, kind, LeverageMode::LeverageApprox);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6, "{kind:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(0.0, 0).is_err());
        assert!(SamplerConfig::new(1.0, 0).is_err());
        assert!(SamplerConfig::new(0.5, 0).unwrap().with_oversample(0.0).is_err());
        assert_eq!(SamplerConfig::new(0.5, 0).unwrap().oversample_c, 8.0);
    }

    #[test]
    fn saturated_sampling_is_identity() {
        let g = unit_triangle();
        let cfg = SamplerConfig::new(0.1, 3).unwrap();
        let out = sample_sparsifier(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = unit_triangle();
        let cfg = SamplerConfig::new(0.5, 11).unwrap().with_oversample(0.2).unwrap();
        let a = sample_edges(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
        let b = sample_edges(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.weight > 0.0));
    }

    #[test]
    fn edge_uniform_is_keyed() {
        assert_eq!(edge_uniform(5, 9), edge_uniform(5, 9));
        assert_ne!(edge_uniform(5, 9), edge_uniform(5, 10));
        assert_ne!(edge_uniform(5, 9), edge_uniform(6, 9));
    }
}
