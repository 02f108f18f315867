//! Seeded random corpora for property suites.

use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::causal::CausalDag;
use crate::elements::{category_of_elements, enumerate_squares, migrate_pullback, Instance, LiftingProblem};
use crate::fincat::{enumerate_functors, FinCategory, Functor, SetFunctor};
use crate::library;

pub const MAX_ROWS: usize = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every labelled DAG on variables `a, b, ...`.
pub fn all_labelled_dags(n: usize) -> Vec<CausalDag> {
    let names: Vec<String> = (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut c = code;
        let mut edges = Vec::new();
        for &(i, j) in &pairs {
            match c % 3 {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        if let Ok(g) = CausalDag::new(names.clone(), edges) {
            out.push(g);
        }
    }
    out
}

/// All functions `[0, src) -> [0, tgt)`, shuffled.
fn shuffled_functions<R: Rng>(src: usize, tgt: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..src {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..tgt).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out.shuffle(rng);
    out
}

fn consistent(schema: &FinCategory, actions: &[Option<Vec<usize>>]) -> bool {
    schema.composable_pairs().all(|(g, f, h)| match (&actions[g], &actions[f], &actions[h]) {
        (Some(ag), Some(af), Some(ah)) => af.iter().zip(ah).all(|(&y, &z)| ag[y] == z),
        _ => true,
    })
}

fn assign<R: Rng>(
    schema: &FinCategory,
    sizes: &[usize],
    order: &[usize],
    actions: &mut Vec<Option<Vec<usize>>>,
    rng: &mut R,
) -> bool {
    let Some((&m, rest)) = order.split_first() else { return true };
    for f in shuffled_functions(sizes[schema.src(m)], sizes[schema.tgt(m)], rng) {
        actions[m] = Some(f);
        if consistent(schema, actions) && assign(schema, sizes, rest, actions, rng) {
            return true;
        }
    }
    actions[m] = None;
    false
}

/// A uniformly sized random set-valued functor with at most `max_rows`
/// elements per object, by randomized backtracking; sizes are redrawn when
/// no functor fits them.
pub fn random_set_functor<R: Rng>(schema: &Arc<FinCategory>, max_rows: usize, rng: &mut R) -> SetFunctor {
    let order: Vec<usize> = schema.morphism_ids().filter(|&m| !schema.is_identity(m)).collect();
    loop {
        let sizes: Vec<usize> = schema.object_ids().map(|_| rng.gen_range(0..=max_rows)).collect();
        let mut actions: Vec<Option<Vec<usize>>> = schema
            .morphism_ids()
            .map(|m| schema.is_identity(m).then(|| (0..sizes[schema.src(m)]).collect()))
            .collect();
        if assign(schema, &sizes, &order, &mut actions, rng) {
            let actions = actions.into_iter().map(|a| a.expect("assigned")).collect();
            return SetFunctor::new(schema.clone(), sizes, actions).expect("backtracking keeps functoriality");
        }
    }
}

/// A random instance whose row ids are drawn from `0..10`.
pub fn random_instance<R: Rng>(schema: &Arc<FinCategory>, max_rows: usize, rng: &mut R) -> Instance {
    let functor = random_set_functor(schema, max_rows, rng);
    let rows = functor
        .sizes()
        .iter()
        .map(|&n| {
            let mut ids: Vec<u64> = index::sample(rng, 10, n).into_iter().map(|i| i as u64).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    Instance::with_rows(functor, rows)
}

pub fn random_functor<R: Rng>(source: &Arc<FinCategory>, target: &Arc<FinCategory>, rng: &mut R) -> Option<Functor> {
    enumerate_functors(source, target).choose(rng).cloned()
}

fn random_schema<R: Rng>(rng: &mut R) -> Arc<FinCategory> {
    library::small_schemas().choose(rng).expect("nonempty library").category.clone()
}

/// Random instances on the library schemas with at most three objects.
pub fn instance_corpus(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let schema = random_schema(&mut rng);
            random_instance(&schema, MAX_ROWS, &mut rng)
        })
        .collect()
}

/// A functor `F: S -> T` with instances `δ` on `S` and `ε` on `T`.
#[derive(Debug, Clone)]
pub struct MigrationCase {
    pub functor: Functor,
    pub delta: Instance,
    pub eps: Instance,
}

fn random_schema_functor<R: Rng>(rng: &mut R) -> Functor {
    loop {
        let (s, t) = (random_schema(rng), random_schema(rng));
        if let Some(f) = random_functor(&s, &t, rng) {
            return f;
        }
    }
}

/// Independent random `δ` and `ε` along random functors between library
/// schemas.
pub fn migration_corpus(seed: u64, count: usize) -> Vec<MigrationCase> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let functor = random_schema_functor(&mut rng);
            let delta = random_instance(functor.source(), MAX_ROWS, &mut rng);
            let eps = random_instance(functor.target(), MAX_ROWS, &mut rng);
            MigrationCase { functor, delta, eps }
        })
        .collect()
}

/// Cases with `δ = Δ_F ε`.
pub fn pullback_corpus(seed: u64, count: usize) -> Vec<MigrationCase> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let functor = random_schema_functor(&mut rng);
            let eps = random_instance(functor.target(), MAX_ROWS, &mut rng);
            let delta = migrate_pullback(&functor, &eps).expect("schemas line up");
            MigrationCase { functor, delta, eps }
        })
        .collect()
}

/// Random commutative squares `f` against `π_δ`, with `f` a random functor
/// between library categories of at most four objects.
pub fn lifting_corpus(seed: u64, count: usize) -> Vec<LiftingProblem> {
    let mut rng = rng(seed);
    let shapes: Vec<Arc<FinCategory>> = library::categories().into_iter().map(|e| e.category).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (a, b) = (shapes.choose(&mut rng).unwrap(), shapes.choose(&mut rng).unwrap());
        let Some(f) = random_functor(a, b, &mut rng) else { continue };
        let schema = random_schema(&mut rng);
        let ec = category_of_elements(&random_instance(&schema, MAX_ROWS, &mut rng));
        let squares = enumerate_squares(&f, &ec.projection);
        if let Some((mu, nu)) = squares.choose(&mut rng) {
            out.push(LiftingProblem::new(f, ec.projection, mu.clone(), nu.clone()).expect("enumerated squares commute"));
        }
    }
    out
}
