use catcausal::corpus::{instance_corpus, lifting_corpus, migration_corpus, pullback_corpus};
use catcausal::elements::{
    category_of_elements, check_adjunction, check_opfibration_fibers, migrate_left_kan, migrate_right_kan,
    solve_lifting, verify_pullback_square,
};
use catcausal::fincat::enumerate_functors;

#[test]
fn elements_cardinalities_and_fibers() {
    for inst in instance_corpus(2024, 100) {
        let schema = inst.schema();
        let ec = category_of_elements(&inst);
        let objects: usize = schema.object_ids().map(|s| inst.size(s)).sum();
        let morphisms: usize = schema.morphism_ids().map(|f| inst.size(schema.src(f))).sum();
        assert_eq!(ec.category.num_objects(), objects);
        assert_eq!(ec.category.num_morphisms(), morphisms);
        assert!(check_opfibration_fibers(&ec).holds);
    }
}

#[test]
fn lifting_solver_agrees_with_brute_force() {
    for lp in lifting_corpus(77, 60) {
        let brute: Vec<_> = enumerate_functors(lp.f().target(), lp.p().source())
            .into_iter()
            .filter(|h| lp.p().after(h).unwrap() == *lp.nu() && h.after(lp.f()).unwrap() == *lp.mu())
            .collect();
        assert_eq!(solve_lifting(&lp), brute);
    }
}

#[test]
fn migration_adjunctions() {
    for case in migration_corpus(404, 60) {
        let r = check_adjunction(&case.functor, &case.delta, &case.eps).unwrap();
        assert!(r.holds, "{:?}", case.functor);
    }
}

#[test]
fn kan_extensions_along_constant_functors_to_a_point() {
    // Σ and Π into a point are the colimit and limit; on discrete sources
    // these are sums and products
    for case in migration_corpus(8, 40) {
        let s = case.functor.source();
        if s.num_morphisms() != s.num_objects() || case.functor.target().num_objects() != 1 {
            continue;
        }
        let sizes: Vec<usize> = s.object_ids().map(|o| case.delta.size(o)).collect();
        let t = case.functor.target();
        if t.num_morphisms() != 1 {
            continue;
        }
        assert_eq!(migrate_left_kan(&case.functor, &case.delta).unwrap().instance.size(0), sizes.iter().sum::<usize>());
        assert_eq!(
            migrate_right_kan(&case.functor, &case.delta).unwrap().instance.size(0),
            sizes.iter().product::<usize>()
        );
    }
}

#[test]
fn pullback_square_theorem() {
    for case in pullback_corpus(20, 20) {
        assert!(verify_pullback_square(&case.functor, &case.delta, &case.eps).unwrap().holds);
    }
}
