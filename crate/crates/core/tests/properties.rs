use csp_sparsify::applications::kcut::{k_cut_by_double_counting, k_cut_value, partitions};
use csp_sparsify::applications::ksat::{assignment_cut_set, encode_ksat};
use csp_sparsify::applications::twolin::encode_2lin;
use csp_sparsify::applications::twosat::encode_2sat;
use csp_sparsify::cut_sparsify::{leverage_scores, quadratic_form, sample_edges, SignVector};
use csp_sparsify::double_cover::{gamma, pull_back};
use csp_sparsify::format::{parse_instance, parse_instance_as, print_instance, FormatHint, ParsedInstance};
use csp_sparsify::generate::{self, rng};
use csp_sparsify::oracle::{check_or2cut, check_reduction_identities, verify_instances};
use csp_sparsify::pipeline::sparsify_instance;
use csp_sparsify::{
    Constraint, Edge, Predicate, QuadraticFormKind, SamplerConfig, SparsifiabilityClass,
    VcspInstance, VertexSet, WeightedDigraph,
};
use proptest::prelude::*;

fn digraph(max_n: usize, max_m: usize) -> impl Strategy<Value = WeightedDigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 0.1f64..10.0), 0..=max_m).prop_map(move |es| {
            WeightedDigraph::new(n, es.into_iter().map(|(u, v, w)| Edge::new(u, v, w))).unwrap()
        })
    })
}

fn predicate() -> impl Strategy<Value = Predicate> {
    (0u8..16).prop_map(|t| Predicate::from_table(t).unwrap())
}

fn instance(max_n: usize, max_m: usize) -> impl Strategy<Value = VcspInstance> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, predicate(), 0.0f64..10.0), 0..=max_m).prop_map(
            move |cs| {
                VcspInstance::new(n, cs.into_iter().map(|(u, v, p, w)| Constraint::new(u, v, p, w)))
                    .unwrap()
            },
        )
    })
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_equals_predicate_value_of_digraph(g in digraph(8, 20), p in predicate()) {
        let inst = g.to_instance(p);
        let h = inst.to_digraph(p).unwrap();
        for mask in 0..1u64 << g.n() {
            let a: Vec<bool> = (0..g.n()).map(|i| mask >> i & 1 == 1).collect();
            let s = VertexSet::from_assignment(&a);
            prop_assert_eq!(inst.value(&a), h.predicate_value(p, &s));
        }
    }

    #[test]
    fn partition_preserves_count_and_weight(inst in instance(6, 30)) {
        let parts = inst.partition_by_predicate();
        let count: usize = parts.values().map(VcspInstance::len).sum();
        prop_assert_eq!(count, inst.len());
        for (p, sub) in &parts {
            prop_assert!(sub.constraints().iter().all(|c| c.predicate == *p));
        }
        let mut ws: Vec<f64> = parts.values().flat_map(|s| s.constraints().iter().map(|c| c.weight)).collect();
        let mut orig: Vec<f64> = inst.constraints().iter().map(|c| c.weight).collect();
        ws.sort_by(f64::total_cmp);
        orig.sort_by(f64::total_cmp);
        prop_assert_eq!(ws, orig);
    }

    #[test]
    fn predicate_value_is_additive(g in digraph(6, 12), split in 0usize..12, p in predicate()) {
        let k = split.min(g.m());
        let a = WeightedDigraph::new(g.n(), g.edges()[..k].iter().copied()).unwrap();
        let b = WeightedDigraph::new(g.n(), g.edges()[k..].iter().copied()).unwrap();
        for mask in 0..1u64 << g.n() {
            let s = VertexSet::from_mask(g.n(), mask);
            let total = g.predicate_value(p, &s);
            prop_assert!(close(total, a.predicate_value(p, &s) + b.predicate_value(p, &s), g.total_weight()));
        }
    }

    #[test]
    fn gamma_is_a_bijection(g in digraph(8, 20)) {
        let c = gamma(&g);
        prop_assert_eq!(c.graph().m(), g.m());
        prop_assert_eq!(c.graph().total_weight(), g.total_weight());
        prop_assert!(c.graph().edges().iter().all(|e| e.src < g.n() && e.dst >= g.n()));
        prop_assert_eq!(pull_back(&c).unwrap(), g.clone());
        prop_assert_eq!(gamma(&pull_back(&c).unwrap()), c);
    }

    #[test]
    fn reduction_identities_hold(g in digraph(6, 15)) {
        let r = check_reduction_identities(&g).unwrap();
        prop_assert!(r.all_hold(), "{:?}", r.violations.first());
    }

    #[test]
    fn quadratic_forms_encode_cut_and_uncut(g in digraph(8, 20)) {
        for mask in 0..1u64 << g.n() {
            let s = VertexSet::from_mask(g.n(), mask);
            let ind: Vec<f64> = (0..g.n()).map(|v| f64::from(u8::from(s.contains(v)))).collect();
            let lap = quadratic_form(&g, QuadraticFormKind::Laplacian, &ind).unwrap();
            prop_assert!(close(lap, g.predicate_value(Predicate::CUT, &s), g.total_weight()));
            let phi = SignVector::from_set(&s);
            let neg = quadratic_form(&g, QuadraticFormKind::NegatedLaplacian, phi.as_slice()).unwrap();
            prop_assert!(close(neg, 4.0 * g.predicate_value(Predicate::UNCUT, &s), 4.0 * g.total_weight()));
        }
    }

    #[test]
    fn leverage_scores_bounded_and_sum_to_rank(g in digraph(10, 30)) {
        let scores = leverage_scores(&g, QuadraticFormKind::Laplacian);
        prop_assert!(scores.iter().all(|&s| (0.0..=1.0).contains(&s)));
        // Σ_components (n_c − 1) = n − #components
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn find(p: &mut Vec<usize>, v: usize) -> usize {
            if p[v] != v { let r = find(p, p[v]); p[v] = r; }
            p[v]
        }
        for e in g.edges() {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            parent[a] = b;
        }
        let comps = (0..g.n()).filter(|&v| find(&mut parent, v) == v).count();
        let total: f64 = scores.iter().sum();
        prop_assert!((total - (g.n() - comps) as f64).abs() < 1e-6, "{} vs {}", total, g.n() - comps);
    }

    #[test]
    fn sampled_edges_are_a_reweighted_subset(g in digraph(10, 40), seed in any::<u64>(), c in 0.05f64..2.0) {
        let cfg = SamplerConfig::new(0.5, seed).unwrap().with_oversample(c).unwrap();
        let kept = sample_edges(&g, QuadraticFormKind::Laplacian, &cfg).unwrap();
        prop_assert!(kept.windows(2).all(|w| w[0].index < w[1].index));
        prop_assert!(kept.iter().all(|r| r.index < g.m() && r.weight >= g.edges()[r.index].weight));
        prop_assert_eq!(&kept, &sample_edges(&g, QuadraticFormKind::Laplacian, &cfg).unwrap());
    }

    #[test]
    fn pipeline_contracts(inst in instance(7, 40), seed in any::<u64>(), eps in 0.05f64..0.95) {
        let cfg = SamplerConfig::new(eps, seed).unwrap();
        let (out, report) = sparsify_instance(&inst, &cfg).unwrap();
        // report consistency
        prop_assert_eq!(report.total_in, inst.len());
        prop_assert_eq!(report.total_out, out.len());
        prop_assert_eq!(report.classes.iter().map(|c| c.out_count).sum::<usize>(), out.len());
        prop_assert!(report.total_out <= report.total_in);
        // determinism
        prop_assert_eq!(&(out.clone(), report.clone()), &sparsify_instance(&inst, &cfg).unwrap());

        let out_parts = out.partition_by_predicate();
        for (p, sub) in inst.partition_by_predicate() {
            let got = out_parts.get(&p).cloned().unwrap_or_else(|| VcspInstance::new(inst.n(), []).unwrap());
            match p.classify() {
                SparsifiabilityClass::NonSparsifiable => prop_assert_eq!(got, sub),
                SparsifiabilityClass::SparsifiableTrivial => {
                    let r = verify_instances(&sub, &got).unwrap();
                    prop_assert!(!r.zero_mismatch && r.max_rel_error <= 1e-9);
                }
                SparsifiabilityClass::SparsifiableNontrivial => {
                    // every output constraint appears in the input with the same endpoints
                    for c in got.constraints() {
                        prop_assert!(sub.constraints().iter().any(|o| (o.u, o.v) == (c.u, c.v)));
                    }
                }
            }
        }
    }

    #[test]
    fn two_sat_encoding_is_exact(seed in any::<u64>(), n in 2usize..=12, m in 0usize..40) {
        let f = generate::random_2sat(&mut rng(seed), n, m);
        let inst = encode_2sat(&f);
        for mask in 0..1u64 << n {
            let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            prop_assert!(close(inst.value(&a), f.value(&a), inst.total_weight()));
        }
    }

    #[test]
    fn two_lin_encoding_is_exact(seed in any::<u64>(), n in 2usize..=12, m in 0usize..40) {
        let sys = generate::random_2lin(&mut rng(seed), n, m);
        let inst = encode_2lin(&sys);
        for mask in 0..1u64 << n {
            let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            prop_assert!(close(inst.value(&a), sys.value(&a), inst.total_weight()));
        }
    }

    #[test]
    fn ksat_cut_bijection(seed in any::<u64>(), n in 3usize..=10, m in 0usize..30, k in 1usize..=3) {
        let f = generate::random_ksat(&mut rng(seed), n, m, k);
        let h = encode_ksat(&f);
        for mask in 0..1u64 << n {
            let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let cut = f.offset() + h.cut_value(&assignment_cut_set(&a));
            prop_assert!(close(cut, f.value(&a), h.hyperedges().iter().map(|e| e.weight).sum()));
        }
    }

    #[test]
    fn or2cut_identity(seed in any::<u64>(), n in 2usize..=9, m in 0usize..30) {
        let g = generate::random_digraph(&mut rng(seed), n, m, 0.1, 10.0);
        prop_assert!(check_or2cut(&g).unwrap());
    }

    #[test]
    fn vcsp_format_roundtrip(inst in instance(10, 20)) {
        let p = ParsedInstance::Vcsp(inst);
        prop_assert_eq!(parse_instance(&print_instance(&p)).unwrap(), p);
    }

    #[test]
    fn other_formats_roundtrip(seed in any::<u64>(), n in 3usize..=10, m in 0usize..20) {
        let two = ParsedInstance::TwoSat(generate::random_2sat(&mut rng(seed), n, m));
        prop_assert_eq!(parse_instance_as(&print_instance(&two), FormatHint::TwoSat).unwrap(), two);
        let lin = ParsedInstance::TwoLin(generate::random_2lin(&mut rng(seed), n, m));
        prop_assert_eq!(parse_instance(&print_instance(&lin)).unwrap(), lin);
        let k = ParsedInstance::KSat(generate::random_ksat(&mut rng(seed), n, m, 3));
        prop_assert_eq!(parse_instance_as(&print_instance(&k), FormatHint::KSat).unwrap(), k);
    }
}

#[test]
fn k_cut_double_counting_small() {
    let mut r = rng(17);
    for n in 1..=6 {
        let g = generate::random_digraph(&mut r, n.max(2), 3 * n, 0.1, 10.0);
        for parts in partitions(g.n(), 4) {
            let direct = k_cut_value(&g, &parts).unwrap();
            let counted = k_cut_by_double_counting(&g, &parts).unwrap();
            assert!(close(direct, counted, g.total_weight()));
        }
    }
}
