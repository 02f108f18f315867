use std::sync::Arc;

use serde::Serialize;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::Functor;
use super::FunctorError;

/// A natural transformation between two parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransformation {
    source: Functor,
    target: Functor,
    components: Vec<MorId>,
}

impl NatTransformation {
    pub fn new(source: Functor, target: Functor, components: Vec<MorId>) -> Result<Self, FunctorError> {
        check_parallel(&source, &target)?;
        let c = source.source().clone();
        let d = source.target().clone();
        if components.len() != c.num_objects() {
            return Err(FunctorError::Arity);
        }
        for o in c.object_ids() {
            let comp = components[o];
            if comp >= d.num_morphisms()
                || d.src(comp) != source.map_object(o)
                || d.tgt(comp) != target.map_object(o)
            {
                return Err(FunctorError::EndpointMismatch { morphism: comp });
            }
        }
        for f in c.morphism_ids() {
            if !naturality_holds(&source, &target, &components, f) {
                return Err(FunctorError::NotNatural { morphism: f });
            }
        }
        Ok(NatTransformation {
            source,
            target,
            components,
        })
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    pub fn component(&self, object: ObjId) -> MorId {
        self.components[object]
    }
}

fn check_parallel(f: &Functor, g: &Functor) -> Result<(), FunctorError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(FunctorError::NotParallel);
    }
    Ok(())
}

fn naturality_holds(f: &Functor, g: &Functor, components: &[MorId], m: MorId) -> bool {
    let c = f.source();
    let d = f.target();
    let (a, b) = (c.src(m), c.tgt(m));
    d.compose(g.map_morphism(m), components[a]) == d.compose(components[b], f.map_morphism(m))
}

/// Every natural transformation `F => G`, found by backtracking over component
/// choices in ascending object order; a naturality square is checked once
/// both of its components are chosen.
pub fn enumerate_nat_transformations(
    f: &Functor,
    g: &Functor,
) -> Result<Vec<NatTransformation>, FunctorError> {
    check_parallel(f, g)?;
    let c = f.source().clone();
    let d = f.target().clone();
    let mut squares_at = vec![Vec::new(); c.num_objects()];
    for m in c.morphism_ids() {
        if !c.is_identity(m) {
            squares_at[c.src(m).max(c.tgt(m))].push(m);
        }
    }
    let mut out = Vec::new();
    let mut components = vec![usize::MAX; c.num_objects()];

    fn step(
        k: usize,
        f: &Functor,
        g: &Functor,
        d: &FinCategory,
        squares_at: &[Vec<MorId>],
        components: &mut Vec<MorId>,
        out: &mut Vec<NatTransformation>,
    ) {
        if k == components.len() {
            out.push(NatTransformation {
                source: f.clone(),
                target: g.clone(),
                components: components.clone(),
            });
            return;
        }
        for &cand in d.hom(f.map_object(k), g.map_object(k)) {
            components[k] = cand;
            if squares_at[k]
                .iter()
                .all(|&m| naturality_holds(f, g, components, m))
            {
                step(k + 1, f, g, d, squares_at, components, out);
            }
        }
        components[k] = usize::MAX;
    }

    step(0, f, g, &d, &squares_at, &mut components, &mut out);
    Ok(out)
}

/// A finite set-valued functor. The set over object `c` is `0..sizes[c]` and
/// `actions[m][x]` is the image of element `x` under morphism `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    category: Arc<FinCategory>,
    sizes: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetFunctorError {
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("action of morphism {morphism} has {found} entries but its source set has {expected}")]
    ActionLength {
        morphism: MorId,
        expected: usize,
        found: usize,
    },
    #[error("action of morphism {morphism} sends element {element} outside its target set")]
    OutOfRange { morphism: MorId, element: usize },
    #[error("identity morphism {morphism} does not act as the identity")]
    IdentityNotIdentity { morphism: MorId },
    #[error("action of {g}∘{f} differs from action({g})∘action({f}) at element {element}")]
    NonFunctorial {
        g: MorId,
        f: MorId,
        element: usize,
    },
}

impl SetFunctor {
    pub fn new(
        category: Arc<FinCategory>,
        sizes: Vec<usize>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self, SetFunctorError> {
        if sizes.len() != category.num_objects() {
            return Err(SetFunctorError::Arity {
                expected: category.num_objects(),
                found: sizes.len(),
            });
        }
        if actions.len() != category.num_morphisms() {
            return Err(SetFunctorError::Arity {
                expected: category.num_morphisms(),
                found: actions.len(),
            });
        }
        for m in category.morphism_ids() {
            let (s, t) = (category.src(m), category.tgt(m));
            if actions[m].len() != sizes[s] {
                return Err(SetFunctorError::ActionLength {
                    morphism: m,
                    expected: sizes[s],
                    found: actions[m].len(),
                });
            }
            if let Some(element) = actions[m].iter().position(|&y| y >= sizes[t]) {
                return Err(SetFunctorError::OutOfRange { morphism: m, element });
            }
        }
        for o in category.object_ids() {
            let id = category.identity(o);
            if actions[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(SetFunctorError::IdentityNotIdentity { morphism: id });
            }
        }
        for (g, f, gf) in category.composable_pairs() {
            for x in 0..sizes[category.src(f)] {
                if actions[gf][x] != actions[g][actions[f][x]] {
                    return Err(SetFunctorError::NonFunctorial { g, f, element: x });
                }
            }
        }
        Ok(SetFunctor {
            category,
            sizes,
            actions,
        })
    }

    /// The empty functor.
    pub fn empty(category: Arc<FinCategory>) -> Self {
        SetFunctor {
            sizes: vec![0; category.num_objects()],
            actions: vec![Vec::new(); category.num_morphisms()],
            category,
        }
    }

    /// `Hom(r, -)`. The elements over `c` are the morphisms of `Hom(r, c)` in
    /// ascending id order.
    pub fn representable(category: Arc<FinCategory>, r: ObjId) -> Self {
        let sizes: Vec<usize> = category
            .object_ids()
            .map(|c| category.hom(r, c).len())
            .collect();
        let actions = category
            .morphism_ids()
            .map(|m| {
                let (a, b) = (category.src(m), category.tgt(m));
                category
                    .hom(r, a)
                    .iter()
                    .map(|&h| {
                        let composite = category.compose_unchecked(m, h);
                        category.hom(r, b).iter().position(|&x| x == composite).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetFunctor {
            category,
            sizes,
            actions,
        }
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn size(&self, object: ObjId) -> usize {
        self.sizes[object]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn action(&self, morphism: MorId) -> &[usize] {
        &self.actions[morphism]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    /// Precomposition with `f`: the functor `self ∘ f` on the source of `f`.
    pub fn pullback(&self, f: &Functor) -> SetFunctor {
        assert_eq!(**f.target(), *self.category);
        let src = f.source();
        SetFunctor {
            category: src.clone(),
            sizes: src.object_ids().map(|o| self.sizes[f.map_object(o)]).collect(),
            actions: src
                .morphism_ids()
                .map(|m| self.actions[f.map_morphism(m)].clone())
                .collect(),
        }
    }
}

/// Components of a natural transformation between set-valued functors:
/// `components[c][x]` is the image of `x ∈ K(c)` in `L(c)`.
pub type SetTransformation = Vec<Vec<usize>>;

/// Checks the naturality squares of a candidate transformation `K => L`.
pub fn is_set_transformation(k: &SetFunctor, l: &SetFunctor, alpha: &SetTransformation) -> bool {
    let cat = k.category();
    if alpha.len() != cat.num_objects() {
        return false;
    }
    for c in cat.object_ids() {
        if alpha[c].len() != k.size(c) || alpha[c].iter().any(|&y| y >= l.size(c)) {
            return false;
        }
    }
    cat.morphism_ids().all(|m| {
        let (a, b) = (cat.src(m), cat.tgt(m));
        (0..k.size(a)).all(|x| l.action(m)[alpha[a][x]] == alpha[b][k.action(m)[x]])
    })
}

/// Every natural transformation between two set-valued functors on the same
/// category, by backtracking over `(object, element)` slots in ascending order.
pub fn enumerate_set_transformations(k: &SetFunctor, l: &SetFunctor) -> Vec<SetTransformation> {
    assert_eq!(k.category(), l.category(), "functors must share a category");
    let cat = k.category();
    let mut slot_base = Vec::with_capacity(cat.num_objects());
    let mut slots = Vec::new();
    for c in cat.object_ids() {
        slot_base.push(slots.len());
        slots.extend((0..k.size(c)).map(|x| (c, x)));
    }
    let slot_of = |c: ObjId, x: usize| slot_base[c] + x;
    // (morphism, element) squares keyed by the later of their two slots
    let mut checks_at: Vec<Vec<(MorId, usize)>> = vec![Vec::new(); slots.len()];
    for m in cat.morphism_ids() {
        if cat.is_identity(m) {
            continue;
        }
        let (a, b) = (cat.src(m), cat.tgt(m));
        for x in 0..k.size(a) {
            let later = slot_of(a, x).max(slot_of(b, k.action(m)[x]));
            checks_at[later].push((m, x));
        }
    }

    struct Ctx<'a> {
        k: &'a SetFunctor,
        l: &'a SetFunctor,
        slots: Vec<(ObjId, usize)>,
        slot_base: Vec<usize>,
        checks_at: Vec<Vec<(MorId, usize)>>,
    }

    fn step(ctx: &Ctx, i: usize, values: &mut Vec<usize>, out: &mut Vec<SetTransformation>) {
        let cat = ctx.k.category();
        if i == ctx.slots.len() {
            let mut alpha: SetTransformation = vec![Vec::new(); cat.num_objects()];
            for (s, &(c, _)) in ctx.slots.iter().enumerate() {
                alpha[c].push(values[s]);
            }
            out.push(alpha);
            return;
        }
        let (c, _) = ctx.slots[i];
        for cand in 0..ctx.l.size(c) {
            values[i] = cand;
            let ok = ctx.checks_at[i].iter().all(|&(m, x)| {
                let (a, b) = (cat.src(m), cat.tgt(m));
                let image = values[ctx.slot_base[a] + x];
                ctx.l.action(m)[image] == values[ctx.slot_base[b] + ctx.k.action(m)[x]]
            });
            if ok {
                step(ctx, i + 1, values, out);
            }
        }
        values[i] = usize::MAX;
    }

    let mut values = vec![usize::MAX; slots.len()];
    let mut out = Vec::new();
    let ctx = Ctx {
        k,
        l,
        slots,
        slot_base,
        checks_at,
    };
    step(&ctx, 0, &mut values, &mut out);
    out
}

/// Outcome of checking that an explicit map between two finite sets is a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub left_count: usize,
    pub right_count: usize,
    /// Image of each left element in the right set (`None` if it fell outside).
    pub mapping: Vec<Option<usize>>,
    pub holds: bool,
}

impl BijectionReport {
    pub fn from_mapping(right_count: usize, mapping: Vec<Option<usize>>) -> Self {
        let mut hit = vec![false; right_count];
        let mut injective = true;
        for image in mapping.iter().flatten() {
            if std::mem::replace(&mut hit[*image], true) {
                injective = false;
            }
        }
        let holds = injective
            && mapping.iter().all(Option::is_some)
            && mapping.len() == right_count;
        BijectionReport {
            left_count: mapping.len(),
            right_count,
            mapping,
            holds,
        }
    }
}

/// Yoneda: `Nat(Hom(r, -), K) ≅ K(r)` via `α ↦ α_r(1_r)`.
pub fn yoneda_check(k: &SetFunctor, r: ObjId) -> BijectionReport {
    let cat = k.category().clone();
    let hom = SetFunctor::representable(cat.clone(), r);
    let id_index = cat
        .hom(r, r)
        .iter()
        .position(|&m| m == cat.identity(r))
        .unwrap();
    let mapping = enumerate_set_transformations(&hom, k)
        .iter()
        .map(|alpha| Some(alpha[r][id_index]))
        .collect();
    BijectionReport::from_mapping(k.size(r), mapping)
}

/// `Hom(X, Y) ≅ Nat(Hom(-, X), Hom(-, Y))`, with the contravariant hom
/// functors realised as covariant functors on the opposite category. The
/// explicit map sends `g` to postcomposition `g ∘ -`.
pub fn crp_check(cat: &FinCategory, x: ObjId, y: ObjId) -> BijectionReport {
    let op = Arc::new(cat.op());
    let hx = SetFunctor::representable(op.clone(), x);
    let hy = SetFunctor::representable(op.clone(), y);
    let nats = enumerate_set_transformations(&hx, &hy);
    let mapping = cat
        .hom(x, y)
        .iter()
        .map(|&g| {
            // component at c: h ∈ Hom(c, X) ↦ g∘h ∈ Hom(c, Y)
            let alpha: SetTransformation = cat
                .object_ids()
                .map(|c| {
                    cat.hom(c, x)
                        .iter()
                        .map(|&h| {
                            let gh = cat.compose_unchecked(g, h);
                            cat.hom(c, y).iter().position(|&m| m == gh).unwrap()
                        })
                        .collect()
                })
                .collect();
            nats.iter().position(|n| *n == alpha)
        })
        .collect();
    BijectionReport::from_mapping(nats.len(), mapping)
}

/// Candidate universal arrow `⟨r, u: c -> S(r)⟩` from `c` to `S: D -> C`.
#[derive(Debug, Clone)]
pub struct UniversalArrowCandidate {
    pub functor: Functor,
    pub object: ObjId,
    pub universal_object: ObjId,
    pub arrow: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum UniversalityVerdict {
    Holds { probes: usize },
    /// `f: c -> S(d)` factors through `u` in `solutions` ways (0 or at least 2).
    FailsAt {
        object: ObjId,
        arrow: MorId,
        solutions: usize,
    },
}

impl UniversalityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, UniversalityVerdict::Holds { .. })
    }
}

pub fn check_universal_arrow(cand: &UniversalArrowCandidate) -> Result<UniversalityVerdict, FunctorError> {
    let s = &cand.functor;
    let d_cat = s.source();
    let c_cat = s.target();
    let (c, r, u) = (cand.object, cand.universal_object, cand.arrow);
    if c >= c_cat.num_objects() || r >= d_cat.num_objects() {
        return Err(FunctorError::UnknownObject(c.max(r)));
    }
    if u >= c_cat.num_morphisms() || c_cat.src(u) != c || c_cat.tgt(u) != s.map_object(r) {
        return Err(FunctorError::EndpointMismatch { morphism: u });
    }
    let mut probes = 0;
    for d in d_cat.object_ids() {
        for &f in c_cat.hom(c, s.map_object(d)) {
            probes += 1;
            let solutions = d_cat
                .hom(r, d)
                .iter()
                .filter(|&&fp| c_cat.compose(s.map_morphism(fp), u) == Some(f))
                .count();
            if solutions != 1 {
                return Ok(UniversalityVerdict::FailsAt {
                    object: d,
                    arrow: f,
                    solutions,
                });
            }
        }
    }
    Ok(UniversalityVerdict::Holds { probes })
}

/// A retraction pair `(i: c -> c', r: c' -> c)` with `r ∘ i = 1_c`, searched
/// in ascending `(i, r)` order.
pub fn is_retract(cat: &FinCategory, c: ObjId, c_prime: ObjId) -> Option<(MorId, MorId)> {
    let id = cat.identity(c);
    cat.hom(c, c_prime).iter().find_map(|&i| {
        cat.hom(c_prime, c)
            .iter()
            .find(|&&r| cat.compose(r, i) == Some(id))
            .map(|&r| (i, r))
    })
}
