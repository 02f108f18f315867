use std::collections::VecDeque;
use std::sync::Arc;

use super::*;
use crate::library;

fn one_object() -> FinCategory {
    library::discrete(1)
}

// Independent path count: dynamic programming over a topological order.
fn count_paths_dp(q: &Quiver) -> usize {
    let n = q.vertices().len();
    let mut indeg = vec![0usize; n];
    for e in q.edges() {
        indeg[e.tgt] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut ending = vec![1usize; n];
    while let Some(v) = queue.pop_front() {
        for e in q.edges().iter().filter(|e| e.src == v) {
            ending[e.tgt] += ending[v];
            indeg[e.tgt] -= 1;
            if indeg[e.tgt] == 0 {
                queue.push_back(e.tgt);
            }
        }
    }
    ending.iter().sum()
}

// Exhaustive associativity / identity audit, written against the public API only.
fn laws_hold(c: &FinCategory) -> bool {
    for f in c.morphism_ids() {
        if c.compose(c.identity(c.tgt(f)), f) != Some(f) || c.compose(f, c.identity(c.src(f))) != Some(f) {
            return false;
        }
        for g in c.morphism_ids() {
            for h in c.morphism_ids() {
                if c.src(g) == c.tgt(f) && c.src(h) == c.tgt(g) {
                    let l = c.compose(h, c.compose(g, f).unwrap());
                    let r = c.compose(c.compose(h, g).unwrap(), f);
                    if l != r {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn validate_single_object() {
    let c = one_object();
    assert_eq!(c.num_objects(), 1);
    assert_eq!(c.num_morphisms(), 1);
}

#[test]
fn validate_z2_monoid() {
    let c = library::z2();
    assert_eq!(c.compose(1, 1), Some(0));
    assert!(laws_hold(&c));
}

#[test]
fn validate_reports_non_associative_triple() {
    // {id, a, b} on one object with a∘a = id, a∘b = a, b∘a = a, b∘b = b
    let table = [[0, 1, 2], [1, 0, 1], [2, 1, 2]];
    let err = FinCategory::from_composition_fn(
        vec!["*".into()],
        vec![Morphism::new("id", 0, 0), Morphism::new("a", 0, 0), Morphism::new("b", 0, 0)],
        vec![0],
        |g, f| table[g][f],
    )
    .unwrap_err();
    let CategoryError::NonAssociative { h, g, f } = err else {
        panic!("expected NonAssociative, got {err:?}");
    };
    assert_ne!(table[h][table[g][f]], table[table[h][g]][f]);
    assert_eq!((h, g, f), (2, 1, 1));
}

#[test]
fn validate_reports_missing_composite() {
    let err = FinCategory::new(
        vec!["a".into(), "b".into()],
        vec![Morphism::new("id_a", 0, 0), Morphism::new("id_b", 1, 1), Morphism::new("f", 0, 1)],
        vec![0, 1],
        vec![(0, 0, 0), (1, 1, 1), (2, 0, 2)],
    )
    .unwrap_err();
    assert_eq!(err, CategoryError::MissingComposite { g: 1, f: 2 });
}

#[test]
fn validate_reports_bad_identity() {
    let err = FinCategory::from_composition_fn(
        vec!["*".into()],
        vec![Morphism::new("id", 0, 0), Morphism::new("s", 0, 0)],
        vec![0],
        |_, _| 1,
    )
    .unwrap_err();
    assert!(matches!(err, CategoryError::BadIdentity { .. }));
}

#[test]
fn raw_category_round_trip_and_dense_ids() {
    let c = library::split_idempotent();
    let raw = c.to_raw();
    let json = serde_json::to_string(&raw).unwrap();
    let back: RawCategory = serde_json::from_str(&json).unwrap();
    assert_eq!(FinCategory::try_from(back).unwrap(), c);

    let mut sparse = c.to_raw();
    sparse.objects[1].id = 7;
    assert!(matches!(
        FinCategory::try_from(sparse),
        Err(CategoryError::NonDenseId { .. })
    ));
}

#[test]
fn free_category_of_chain() {
    let q = Quiver::from_pairs(&["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
    let c = free_category(&q).unwrap();
    assert_eq!(c.num_objects(), 3);
    assert_eq!(c.num_morphisms(), 6);
    assert_eq!(c.morphism_ids().filter(|&m| c.is_identity(m)).count(), 3);
    assert_eq!(c.hom(0, 2).len(), 1);
    assert_eq!(c.compose(4, 3), Some(5));
}

#[test]
fn free_category_of_single_vertex() {
    let q = Quiver::from_pairs(&["a"], &[]).unwrap();
    let c = free_category(&q).unwrap();
    assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
}

#[test]
fn free_category_rejects_self_loop() {
    let q = Quiver::from_pairs(&["a"], &[(0, 0)]).unwrap();
    assert_eq!(
        free_category(&q).unwrap_err(),
        CategoryError::CyclicQuiver { cycle: vec![0, 0] }
    );
}

#[test]
fn free_category_counts_match_dp_on_all_small_dags() {
    // every simple DAG on 4 labelled vertices whose edges go low -> high
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let q = Quiver::from_pairs(&["a", "b", "c", "d"], &edges).unwrap();
        let c = free_category(&q).unwrap();
        assert_eq!(c.num_morphisms(), count_paths_dp(&q), "edges {edges:?}");
        assert!(laws_hold(&c));
    }
}

#[test]
fn opposite_is_an_involution() {
    for e in library::categories() {
        assert_eq!(e.category.op().op(), *e.category, "{}", e.name);
    }
}

#[test]
fn functor_composition_is_associative_and_unital() {
    let cats: Vec<Arc<FinCategory>> = [library::poset(1), library::z2(), library::walking_isomorphism()]
        .into_iter()
        .map(Arc::new)
        .collect();
    for a in &cats {
        let id_a = Functor::identity(a.clone());
        for b in &cats {
            for f in enumerate_functors(a, b) {
                assert_eq!(f.after(&id_a).unwrap(), f);
                assert_eq!(Functor::identity(b.clone()).after(&f).unwrap(), f);
                for c in &cats {
                    for g in enumerate_functors(b, c) {
                        for h in enumerate_functors(c, &cats[0]) {
                            let left = h.after(&g.after(&f).unwrap()).unwrap();
                            let right = h.after(&g).unwrap().after(&f).unwrap();
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn functor_enumeration_counts() {
    let p1 = Arc::new(library::poset(1));
    let p2 = Arc::new(library::poset(2));
    // functors [1] -> [2] are monotone maps: C(4, 2) = 6
    assert_eq!(enumerate_functors(&p1, &p2).len(), 6);
    let z2 = Arc::new(library::z2());
    assert_eq!(enumerate_functors(&z2, &z2).len(), 2);
    let iso = Arc::new(library::walking_isomorphism());
    assert_eq!(enumerate_functors(&iso, &p1).len(), 2);
}

#[test]
fn nat_transformations_identity_case() {
    let c = Arc::new(one_object());
    let id = Functor::identity(c.clone());
    assert_eq!(enumerate_nat_transformations(&id, &id).unwrap().len(), 1);
}

#[test]
fn nat_transformations_representable_on_poset() {
    let p1 = Arc::new(library::poset(1));
    let hom0 = SetFunctor::representable(p1, 0);
    assert_eq!(enumerate_set_transformations(&hom0, &hom0).len(), 1);
}

#[test]
fn nat_transformations_between_constants_with_empty_hom() {
    let one = Arc::new(one_object());
    let p1 = Arc::new(library::poset(1));
    let at1 = Functor::constant(one.clone(), p1.clone(), 1);
    let at0 = Functor::constant(one, p1, 0);
    assert!(enumerate_nat_transformations(&at1, &at0).unwrap().is_empty());
    assert_eq!(enumerate_nat_transformations(&at0, &at1).unwrap().len(), 1);
}

#[test]
fn nat_transformation_validation() {
    let p1 = Arc::new(library::poset(1));
    let one = Arc::new(one_object());
    let at0 = Functor::constant(one.clone(), p1.clone(), 0);
    let at1 = Functor::constant(one, p1, 1);
    assert!(NatTransformation::new(at0.clone(), at1.clone(), vec![2]).is_ok());
    assert!(NatTransformation::new(at1, at0, vec![2]).is_err());
}

#[test]
fn yoneda_examples() {
    let p1 = Arc::new(library::poset(1));
    let r = yoneda_check(&SetFunctor::representable(p1.clone(), 0), 0);
    assert!(r.holds);
    assert_eq!((r.left_count, r.right_count), (1, 1));

    let r = yoneda_check(&SetFunctor::empty(p1), 0);
    assert!(r.holds);
    assert_eq!((r.left_count, r.right_count), (0, 0));

    let p2 = Arc::new(library::poset(2));
    let r = yoneda_check(&SetFunctor::representable(p2, 0), 1);
    assert!(r.holds);
    assert_eq!(r.right_count, 1);
}

#[test]
fn yoneda_holds_on_library_representables() {
    for e in library::categories() {
        let c = &e.category;
        for a in c.object_ids() {
            let k = SetFunctor::representable(c.clone(), a);
            for r in c.object_ids() {
                assert!(yoneda_check(&k, r).holds, "{} a={a} r={r}", e.name);
            }
        }
    }
}

#[test]
fn crp_examples() {
    let r = crp_check(&one_object(), 0, 0);
    assert!(r.holds && r.left_count == 1);
    let q = Quiver::from_pairs(&["a", "b"], &[(0, 1)]).unwrap();
    let r = crp_check(&free_category(&q).unwrap(), 0, 1);
    assert!(r.holds && r.left_count == 1 && r.right_count == 1);
    let r = crp_check(&library::discrete(2), 0, 1);
    assert!(r.holds && r.left_count == 0 && r.right_count == 0);
}

#[test]
fn crp_holds_on_library() {
    for e in library::categories() {
        for x in e.category.object_ids() {
            for y in e.category.object_ids() {
                assert!(crp_check(&e.category, x, y).holds, "{} {x} {y}", e.name);
            }
        }
    }
}

#[test]
fn universal_arrow_identity_functor() {
    for e in library::categories() {
        for c in e.category.object_ids() {
            let cand = UniversalArrowCandidate {
                functor: Functor::identity(e.category.clone()),
                object: c,
                universal_object: c,
                arrow: e.category.identity(c),
            };
            assert!(check_universal_arrow(&cand).unwrap().holds(), "{}", e.name);
        }
    }
}

#[test]
fn universal_arrow_fails_for_non_initial_object() {
    let p1 = Arc::new(library::poset(1));
    let point = Arc::new(one_object());
    let s = Functor::constant(p1, point, 0);
    let cand = |r| UniversalArrowCandidate {
        functor: s.clone(),
        object: 0,
        universal_object: r,
        arrow: 0,
    };
    assert_eq!(
        check_universal_arrow(&cand(1)).unwrap(),
        UniversalityVerdict::FailsAt {
            object: 0,
            arrow: 0,
            solutions: 0
        }
    );
    assert!(check_universal_arrow(&cand(0)).unwrap().holds());
}

#[test]
fn free_category_unit_is_universal() {
    for pairs in [&[][..], &[(0, 1)][..]] {
        let q = Quiver::from_pairs(&["a", "b"], pairs).unwrap();
        for e in library::categories() {
            let report = check_free_universal_property(&q, &e.category).unwrap();
            assert!(report.holds(), "{} {:?}", e.name, report.failure);
            assert_eq!(report.unique, report.quiver_maps);
        }
    }
    // a quiver map into the walking idempotent: 1 vertex map, 2 edge choices
    let q = Quiver::from_pairs(&["a", "b"], &[(0, 1)]).unwrap();
    let d = Arc::new(library::walking_idempotent());
    assert_eq!(check_free_universal_property(&q, &d).unwrap().quiver_maps, 2);
}

#[test]
fn retract_examples() {
    let p1 = library::poset(1);
    assert_eq!(is_retract(&p1, 0, 0), Some((0, 0)));
    assert_eq!(is_retract(&p1, 1, 0), None);
    let s = library::split_idempotent();
    assert_eq!(is_retract(&s, 0, 1), Some((2, 3)));
    assert_eq!(is_retract(&s, 1, 0), None);
}

#[test]
fn fiber_product_of_identity_is_source() {
    let c = Arc::new(library::poset(2));
    let id = Functor::identity(c.clone());
    let fp = fiber_product(&id, &id).unwrap();
    assert_eq!(fp.category.num_objects(), c.num_objects());
    assert_eq!(fp.category.num_morphisms(), c.num_morphisms());
}

#[test]
fn subcategory_requires_closure() {
    let q = Quiver::from_pairs(&["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
    let c = free_category(&q).unwrap();
    // keep both edges but drop their composite
    let err = c.subcategory(|_| true, |m| m != 5).unwrap_err();
    assert_eq!(err, CategoryError::NotClosed { morphism: 5 });
    let (sub, _, kept) = c.subcategory(|_| true, |m| m == 4).unwrap();
    assert_eq!(sub.num_morphisms(), 4);
    assert_eq!(kept, vec![0, 1, 2, 4]);
}

#[test]
fn irreducible_morphisms_of_free_category_are_edges() {
    let q = Quiver::from_pairs(&["a", "b", "c"], &[(0, 1), (0, 2), (1, 2)]).unwrap();
    let c = free_category(&q).unwrap();
    assert_eq!(c.irreducible_morphisms(), vec![3, 4, 5]);
}
