use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::elements::{do_bind, Instance};
use crate::fincat::{free_category, Quiver, SetFunctor};
use crate::library;
use crate::simplex::{boundary, standard_simplex};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn free(names: &[&str], pairs: &[(usize, usize)]) -> Arc<FinCategory> {
    Arc::new(free_category(&Quiver::from_pairs(names, pairs).unwrap()).unwrap())
}

fn contractible(n: usize) -> Vec<usize> {
    let mut b = vec![0; n];
    b[0] = 1;
    b
}

// determinant by cofactor expansion
fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for c in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

// d_k = D_k / D_{k-1}, D_k the gcd of all k×k minors
fn determinantal_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.to_rows();
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let mut d = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(rows[r][c])).collect()).collect();
                d = gcd(&d, &det(&minor));
            }
        }
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for j in 0..m.cols() {
                    let t = &f * &a[rank][j];
                    a[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn components(cat: &FinCategory) -> usize {
    let mut parent: Vec<usize> = cat.object_ids().collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for m in cat.morphism_ids() {
        let (a, b) = (find(&mut parent, cat.src(m)), find(&mut parent, cat.tgt(m)));
        parent[a] = b;
    }
    (0..cat.num_objects()).filter(|&x| find(&mut parent, x) == x).count()
}

#[test]
fn boundary_of_triangle() {
    let cc = chain_complex(&boundary(2, 2).unwrap()).unwrap();
    let d1 = cc.boundary(1);
    assert_eq!((d1.rows(), d1.cols()), (3, 3));
    for c in 0..3 {
        let col: Vec<i64> = (0..3).map(|r| d1.get(r, c)).collect();
        assert_eq!(col.iter().sum::<i64>(), 0);
        assert_eq!(col.iter().filter(|v| **v != 0).count(), 2);
    }
    assert!(cc.boundary(2).cols() == 0);
    let snf = smith_normal_form(d1);
    assert_eq!((snf.rank, snf.invariants.clone()), (2, big(&[1, 1])));
    let p = homology_profile(&cc);
    assert_eq!(p.betti, vec![1, 1]);
    assert!(p.torsion.iter().all(Vec::is_empty));
}

#[test]
fn boundary_of_tetrahedron_is_a_sphere() {
    let p = homology_profile(&chain_complex(&boundary(3, 3).unwrap()).unwrap());
    assert_eq!(p.betti, vec![1, 0, 1]);
    assert!(p.torsion.iter().all(Vec::is_empty));
}

#[test]
fn point_has_empty_matrices() {
    let cc = chain_complex(&standard_simplex(0, 3)).unwrap();
    for n in 1..=3 {
        assert_eq!(cc.boundary(n).cols(), 0);
    }
    assert_eq!(homology_profile(&cc).betti, contractible(3));
    assert_eq!(chain_complex(&standard_simplex(0, 0)).unwrap().dimension(), 0);
}

#[test]
fn nerve_of_arrow_boundary() {
    let c = free(&["a", "b"], &[(0, 1)]);
    let cc = chain_complex(&nerve(&c, 2).sset).unwrap();
    let d1 = cc.boundary(1);
    assert_eq!(d1.to_rows(), vec![vec![-1], vec![1]]);
    assert_eq!(d1.to_triplets(), "0 0 -1\n1 0 1\n");
}

#[test]
fn smith_examples() {
    let id = smith_normal_form(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]));
    assert_eq!((id.invariants, id.rank), (big(&[1, 1]), 2));
    let d = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
    assert_eq!((d.invariants, d.rank), (big(&[2]), 1));
    let m = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
    assert_eq!(m.invariants, big(&[2, 6, 12]));
    assert!(!m.arbitrary_precision);
}

#[test]
fn smith_switches_to_arbitrary_precision() {
    let m = IntMatrix::from_rows(&[vec![i64::MAX, 1], vec![1, i64::MAX]]);
    let s = smith_normal_form(&m);
    assert!(s.arbitrary_precision);
    let expected: BigInt = BigInt::from(i64::MAX) * BigInt::from(i64::MAX) - 1;
    assert_eq!(s.invariants, vec![BigInt::from(1), expected.clone()]);
    let json = serde_json::to_string(&s).unwrap();
    assert!(json.contains(&format!("\"{expected}\"")));
}

#[test]
fn torsion_from_explicit_complex() {
    let cc = ChainComplex::from_boundaries(vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
    let p = homology_profile(&cc);
    assert_eq!(p.betti, vec![0]);
    assert_eq!(p.torsion, vec![big(&[2])]);
    assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"truncation":1,"betti":[0],"torsion":[[2]]}"#);
}

#[test]
fn square_nonzero_is_reported() {
    let err = ChainComplex::from_boundaries(
        vec![1, 1, 1],
        vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![1]])],
    )
    .unwrap_err();
    assert_eq!(err, HomologyError::BoundarySquareNonzero { degree: 2, column: 0 });
}

#[test]
fn z2_has_the_homology_of_projective_space() {
    let p = classifying_space_profile(&Arc::new(library::z2()), 4);
    assert_eq!(p.betti, contractible(4));
    assert_eq!(p.torsion, vec![vec![], big(&[2]), vec![], big(&[2])]);
}

#[test]
fn classifying_space_examples() {
    for k in 1..=3 {
        assert_eq!(classifying_space_profile(&Arc::new(library::discrete(k)), 4).betti[0], k);
    }
    let chain = free(&["a", "b", "c"], &[(0, 1), (1, 2)]);
    assert_eq!(classifying_space_profile(&chain, 4).betti, contractible(4));
    let collider = free(&["a", "b", "c"], &[(0, 2), (1, 2)]);
    assert_eq!(classifying_space_profile(&collider, 4).betti, contractible(4));
}

#[test]
fn terminal_or_initial_object_is_contractible() {
    for e in library::categories() {
        let c = &e.category;
        let p = classifying_space_profile(c, 4);
        if c.terminal_object().is_some() || c.initial_object().is_some() {
            assert_eq!(p.betti, contractible(4), "{}", e.name);
            assert!(p.torsion.iter().all(Vec::is_empty), "{}", e.name);
        }
        assert_eq!(p.betti[0], components(c), "{}", e.name);
    }
}

#[test]
fn boundary_squares_vanish_on_library_nerves() {
    for e in library::categories() {
        let cc = chain_complex(&nerve(&e.category, 4).sset).unwrap();
        for n in 2..=4 {
            assert!(cc.boundary(n - 1).mul(cc.boundary(n)).unwrap().is_zero(), "{}", e.name);
        }
    }
}

#[test]
fn profiles_ignore_basis_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in library::categories() {
        let cc = chain_complex(&nerve(&e.category, 4).sset).unwrap();
        let before = homology_profile(&cc);
        for _ in 0..3 {
            let perms: Vec<Vec<usize>> = cc
                .ranks()
                .into_iter()
                .map(|r| {
                    let mut p: Vec<usize> = (0..r).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            let shuffled = cc.permuted(&perms);
            assert!(shuffled.check_square_zero().is_ok());
            assert_eq!(homology_profile(&shuffled), before, "{}", e.name);
        }
    }
}

fn singletons(schema: &Arc<FinCategory>) -> Instance {
    let sizes = vec![1; schema.num_objects()];
    let actions = vec![vec![0]; schema.num_morphisms()];
    Instance::from_set_functor(SetFunctor::new(schema.clone(), sizes, actions).unwrap())
}

fn instance(schema: &Arc<FinCategory>, tables: &[&[u64]], actions: &[(usize, &[(u64, u64)])]) -> Instance {
    let actions: BTreeMap<usize, BTreeMap<u64, u64>> =
        actions.iter().map(|(m, p)| (*m, p.iter().copied().collect())).collect();
    Instance::from_rows(schema.clone(), tables.iter().map(|t| t.to_vec()).collect(), actions).unwrap()
}

#[test]
fn hocolim_examples() {
    for e in library::small_schemas() {
        assert_eq!(
            hocolim_profile(&singletons(&e.category), 4),
            classifying_space_profile(&e.category, 4),
            "{}",
            e.name
        );
    }
    let arrow = free(&["a", "b"], &[(0, 1)]);
    let two = instance(&arrow, &[&[1, 2], &[10, 20]], &[(2, &[(1, 10), (2, 20)])]);
    assert_eq!(hocolim_profile(&two, 4).betti, vec![2, 0, 0, 0]);
    let empty = Instance::from_set_functor(SetFunctor::empty(arrow));
    let p = hocolim_profile(&empty, 4);
    assert_eq!(p.betti, vec![0; 4]);
    assert!(p.torsion.iter().all(Vec::is_empty));
}

#[test]
fn disconnecting_intervention_is_certified() {
    let chain = free(&["a", "b", "c"], &[(0, 1), (1, 2)]);
    let delta = instance(&chain, &[&[0], &[0, 1], &[0]], &[(3, &[(0, 1)]), (4, &[(0, 0), (1, 0)])]);
    let before = hocolim_profile(&delta, 4);
    let after = hocolim_profile(&do_bind(&delta, 1, 0).unwrap(), 4);
    assert_eq!((before.betti[0], after.betti[0]), (1, 2));
    let v = causal_effect(&before, &after).unwrap();
    assert_eq!(
        v.verdict,
        Verdict::NonIsomorphicCertified {
            degree: 0,
            differing: DifferingInvariant::Betti { before: 1, after: 2 }
        }
    );
    assert_eq!(causal_effect(&before, &before).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn causal_effect_examples() {
    let circle = HomologyProfile {
        truncation: 2,
        betti: vec![1, 1],
        torsion: vec![vec![], vec![]],
    };
    let point = HomologyProfile {
        betti: vec![1, 0],
        ..circle.clone()
    };
    assert_eq!(causal_effect(&circle, &point).unwrap().certified_degree(), Some(1));
    let deeper = HomologyProfile {
        truncation: 3,
        betti: vec![1, 0, 0],
        torsion: vec![vec![]; 3],
    };
    assert_eq!(
        causal_effect(&point, &deeper).unwrap_err(),
        HomologyError::TruncationMismatch { before: 2, after: 3 }
    );
    let torsion = HomologyProfile {
        torsion: vec![vec![], big(&[2])],
        ..point.clone()
    };
    let v = causal_effect(&point, &torsion).unwrap();
    assert!(matches!(v.verdict, Verdict::NonIsomorphicCertified { degree: 1, differing: DifferingInvariant::Torsion { .. } }));
}

#[test]
fn causal_effect_is_symmetric_on_library() {
    let profiles: Vec<HomologyProfile> =
        library::categories().iter().map(|e| classifying_space_profile(&e.category, 4)).collect();
    for a in &profiles {
        for b in &profiles {
            let ab = causal_effect(a, b).unwrap().certified_degree();
            let ba = causal_effect(b, a).unwrap().certified_degree();
            assert_eq!(ab, ba);
            assert_eq!(ab.is_none(), a == b);
        }
    }
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #[test]
    fn smith_matches_determinantal_divisors(m in small_matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&s.invariants, &determinantal_invariants(&m));
        prop_assert_eq!(s.rank, rational_rank(&m));
        prop_assert!(s.invariants.iter().all(|d| d.is_positive()));
        for w in s.invariants.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }
}
