use csp_sparsify::cut_sparsify::{
    leverage_scores_with, quadratic_form, sample_edges, sample_sparsifier, LeverageMode,
};
use csp_sparsify::generate::{self, rng};
use csp_sparsify::oracle::verify_graphs;
use csp_sparsify::pipeline::sparsify_predicate_graph;
use csp_sparsify::{Edge, Predicate, QuadraticFormKind, SamplerConfig, VertexSet, WeightedDigraph};
use rand::Rng;

#[test]
fn unbiased_cut_values() {
    let g = WeightedDigraph::new(
        4,
        [
            Edge::new(0, 1, 1.0),
            Edge::new(1, 2, 2.0),
            Edge::new(2, 3, 1.5),
            Edge::new(3, 0, 0.5),
            Edge::new(0, 2, 3.0),
            Edge::new(1, 3, 1.0),
        ],
    )
    .unwrap();
    let trials = 2000;
    let base = SamplerConfig::new(0.5, 0).unwrap().with_oversample(0.05).unwrap();
    let samples: Vec<WeightedDigraph> = (0..trials)
        .map(|seed| sample_sparsifier(&g, QuadraticFormKind::Laplacian, &base.with_seed(seed)).unwrap())
        .collect();
    assert!(samples.iter().any(|s| s.m() < g.m()), "oversample too high to exercise sampling");
    for mask in 1..15u64 {
        let s = VertexSet::from_mask(4, mask);
        let truth = g.predicate_value(Predicate::CUT, &s);
        let vals: Vec<f64> = samples.iter().map(|h| h.predicate_value(Predicate::CUT, &s)).collect();
        let mean = vals.iter().sum::<f64>() / trials as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!((mean - truth).abs() <= 3.0 * se + 1e-12, "S={mask:b}: mean {mean} vs {truth} (se {se})");
    }
}

#[test]
fn saturated_probabilities_return_input() {
    let g = generate::random_digraph(&mut rng(1), 8, 20, 0.1, 10.0);
    let cfg = SamplerConfig::new(0.05, 4).unwrap();
    assert_eq!(sample_sparsifier(&g, QuadraticFormKind::Laplacian, &cfg).unwrap(), g);
}

#[test]
fn cut_sparsifier_quality_on_random_graphs() {
    let mut good = 0;
    for seed in 0..20u64 {
        let g = generate::random_digraph(&mut rng(1000 + seed), 12, 60, 0.1, 10.0);
        let cfg = SamplerConfig::new(0.25, seed).unwrap();
        let h = sample_sparsifier(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
        if verify_graphs(&g, &h, Predicate::CUT).unwrap().within(0.25) {
            good += 1;
        }
    }
    assert!(good >= 18, "{good}/20");
}

#[test]
fn predicate_independent_cover_sample() {
    let g = generate::random_digraph(&mut rng(5), 10, 400, 0.1, 10.0);
    let cfg = SamplerConfig::new(0.9, 3).unwrap().with_oversample(0.5).unwrap();
    let (cut, _) = sparsify_predicate_graph(&g, Predicate::CUT, &cfg).unwrap();
    let (uncut, _) = sparsify_predicate_graph(&g, Predicate::UNCUT, &cfg).unwrap();
    let (or, _) = sparsify_predicate_graph(&g, Predicate::OR, &cfg).unwrap();
    assert!(cut.m() < g.m());
    assert_eq!(cut, uncut);
    assert_eq!(cut, or);
}

#[test]
fn exact_and_approximate_leverage_agree() {
    let g = generate::random_digraph(&mut rng(9), 40, 200, 0.1, 10.0);
    for kind in [QuadraticFormKind::Laplacian, QuadraticFormKind::NegatedLaplacian] {
        let a = leverage_scores_with(&g, kind, LeverageMode::LeverageExact);
        let b = leverage_scores_with(&g, kind, LeverageMode::LeverageApprox);
        let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{kind:?}: {worst}");
    }
}

/// A dense multigraph with the default oversampling actually loses edges,
/// and every predicate stays within ε over all subsets.
#[test]
fn dense_multigraph_is_sparsified() {
    let n = 12;
    let m = 6000;
    let g = generate::random_digraph(&mut rng(77), n, m, 0.1, 10.0);
    let eps = 0.9;
    let mut good = 0;
    for seed in 0..5u64 {
        let cfg = SamplerConfig::new(eps, seed).unwrap();
        let (h, _) = sparsify_predicate_graph(&g, Predicate::CUT, &cfg).unwrap();
        assert!(h.m() < m / 2, "kept {} of {m}", h.m());
        let ok = [Predicate::CUT, Predicate::UNCUT, Predicate::OR, Predicate::N01]
            .into_iter()
            .all(|p| verify_graphs(&g, &h, p).unwrap().within(eps));
        good += usize::from(ok);
    }
    assert!(good >= 4, "{good}/5");
}

#[test]
fn negated_laplacian_spectral_property() {
    let mut good = 0;
    for seed in 0..20u64 {
        let mut r = rng(500 + seed);
        let g = generate::random_digraph(&mut r, 12, 60, 0.1, 10.0);
        let cfg = SamplerConfig::new(0.5, seed).unwrap();
        let h = sample_sparsifier(&g, QuadraticFormKind::NegatedLaplacian, &cfg).unwrap();
        let ok = (0..100).all(|_| {
            let x: Vec<f64> = (0..12).map(|_| r.gen_range(-1.0..1.0)).collect();
            let a = quadratic_form(&g, QuadraticFormKind::NegatedLaplacian, &x).unwrap();
            let b = quadratic_form(&h, QuadraticFormKind::NegatedLaplacian, &x).unwrap();
            (b - a).abs() <= 0.5 * a
        });
        good += usize::from(ok);
    }
    assert!(good >= 18, "{good}/20");
}

#[test]
fn kept_edges_preserve_direction() {
    let g = generate::random_digraph(&mut rng(3), 10, 500, 0.1, 10.0);
    let cfg = SamplerConfig::new(0.9, 1).unwrap().with_oversample(0.3).unwrap();
    let kept = sample_edges(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
    let h = sample_sparsifier(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
    for (r, e) in kept.iter().zip(h.edges()) {
        let o = g.edges()[r.index];
        assert_eq!((o.src, o.dst), (e.src, e.dst));
    }
}
