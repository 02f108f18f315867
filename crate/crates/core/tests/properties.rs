use std::sync::Arc;

use catcausal::causal::{
    enumerate_immoralities, imset_equal, intervene, markov_equivalent, parse_dot, standard_imset, CausalDag,
    Intervention,
};
use catcausal::corpus::{instance_corpus, migration_corpus, pullback_corpus, random_set_functor, rng, MAX_ROWS};
use catcausal::elements::{category_of_elements, check_adjunction, check_opfibration_fibers, verify_pullback_square};
use catcausal::fincat::{yoneda_check, FinCategory};
use catcausal::homology::{causal_effect, hocolim_profile, Verdict};
use catcausal::library;
use catcausal::nerve::nerve;
use catcausal::simplex::{compose_monotone, epi_mono_factorize, MonotoneMap};
use proptest::prelude::*;

fn monotone(m: usize, n: usize) -> impl Strategy<Value = MonotoneMap> {
    proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
        v.sort_unstable();
        MonotoneMap::new(m, n, v).unwrap()
    })
}

fn composable() -> impl Strategy<Value = (MonotoneMap, MonotoneMap, MonotoneMap)> {
    (0..5usize, 0..5usize, 0..5usize, 0..5usize)
        .prop_flat_map(|(a, b, c, d)| (monotone(a, b), monotone(b, c), monotone(c, d)))
}

/// DAGs on `n` variables from an edge bitmask over pairs oriented by a
/// random topological order, so every labelled DAG is reachable.
fn dag(n: usize) -> impl Strategy<Value = CausalDag> {
    (any::<u32>(), Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(move |(mask, order)| {
        let names: Vec<String> = (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> k & 1 == 1 {
                    edges.push((order[i], order[j]));
                }
                k += 1;
            }
        }
        CausalDag::new(names, edges).unwrap()
    })
}

fn library_category() -> impl Strategy<Value = Arc<FinCategory>> {
    let all: Vec<Arc<FinCategory>> = library::categories().into_iter().map(|e| e.category).collect();
    proptest::sample::select(all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_composition_is_associative((f, g, h) in composable()) {
        let left = compose_monotone(&h, &compose_monotone(&g, &f).unwrap()).unwrap();
        let right = compose_monotone(&compose_monotone(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn epi_mono_factors_recompose(f in (0..6usize, 0..6usize).prop_flat_map(|(m, n)| monotone(m, n))) {
        prop_assert_eq!(epi_mono_factorize(&f).recompose(f.domain()).unwrap(), f);
    }

    #[test]
    fn nerves_pass_their_audit(c in library_category(), n in 1..5usize) {
        let x = nerve(&c, n).sset;
        prop_assert!(x.audit().is_ok());
        prop_assert_eq!(x.count(0), c.num_objects());
        prop_assert_eq!(x.count(1), c.num_morphisms());
    }

    #[test]
    fn imsets_decide_markov_equivalence(g in dag(5), h in dag(5)) {
        let by_imset = imset_equal(&standard_imset(&g), &standard_imset(&h)).unwrap();
        let by_graph = g.skeleton() == h.skeleton() && enumerate_immoralities(&g) == enumerate_immoralities(&h);
        prop_assert_eq!(by_imset, by_graph);
        prop_assert_eq!(markov_equivalent(&g, &h).unwrap().equivalent, by_graph);
    }

    #[test]
    fn dot_round_trips(g in dag(5)) {
        prop_assert_eq!(parse_dot(&g.to_dot()).unwrap(), g);
    }

    #[test]
    fn do_removes_exactly_the_incoming_edges(g in dag(4), v in 0..4usize) {
        let name = g.variables()[v].clone();
        let h = intervene(&g, &Intervention::DoVariable { variable: name }).unwrap();
        let kept: Vec<_> = g.edges().iter().copied().filter(|&(_, b)| b != v).collect();
        prop_assert_eq!(h.edges(), kept.as_slice());
    }

    #[test]
    fn elements_have_one_object_per_row(seed in any::<u64>()) {
        for inst in instance_corpus(seed, 3) {
            let ec = category_of_elements(&inst);
            prop_assert_eq!(ec.category.num_objects(), inst.total_rows());
            prop_assert!(check_opfibration_fibers(&ec).holds);
        }
    }

    #[test]
    fn migrations_are_adjoint(seed in any::<u64>()) {
        for case in migration_corpus(seed, 2) {
            prop_assert!(check_adjunction(&case.functor, &case.delta, &case.eps).unwrap().holds);
        }
    }

    #[test]
    fn pullbacks_give_pullback_squares(seed in any::<u64>()) {
        for case in pullback_corpus(seed, 2) {
            prop_assert!(verify_pullback_square(&case.functor, &case.delta, &case.eps).unwrap().holds);
        }
    }

    #[test]
    fn yoneda_holds_on_random_functors(c in library_category(), seed in any::<u64>()) {
        let k = random_set_functor(&c, MAX_ROWS, &mut rng(seed));
        for r in c.object_ids() {
            prop_assert!(yoneda_check(&k, r).holds);
        }
    }

    #[test]
    fn effect_verdict_is_symmetric(seed in any::<u64>()) {
        let pair = instance_corpus(seed, 2);
        let (p, q) = (hocolim_profile(&pair[0], 3), hocolim_profile(&pair[1], 3));
        let there = causal_effect(&p, &q).unwrap();
        let back = causal_effect(&q, &p).unwrap();
        prop_assert_eq!(there.certified_degree(), back.certified_degree());
        prop_assert_eq!(causal_effect(&p, &p).unwrap().verdict, Verdict::Inconclusive);
    }
}
