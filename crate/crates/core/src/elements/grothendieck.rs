use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{ElementsError, Instance};
use crate::fincat::{fiber_product, BijectionReport, FinCategory, Functor, MorId, Morphism, ObjId};

/// `∫δ` with its projection to the schema. Objects are pairs `(s, x)` with
/// `x` an element index of `δ(s)`, morphisms are pairs `(f, x)` with `x` in
/// the source table of `f`. Both are listed in lexicographic order.
#[derive(Debug, Clone)]
pub struct ElementsCategory {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(ObjId, usize)>,
    pub morphisms: Vec<(MorId, usize)>,
    pub projection: Functor,
}

impl ElementsCategory {
    pub fn object_of(&self, s: ObjId, x: usize) -> Option<ObjId> {
        self.objects.binary_search(&(s, x)).ok()
    }

    pub fn morphism_of(&self, f: MorId, x: usize) -> Option<MorId> {
        self.morphisms.binary_search(&(f, x)).ok()
    }
}

pub fn category_of_elements(inst: &Instance) -> ElementsCategory {
    let schema = inst.schema();
    let delta = inst.functor();
    let objects: Vec<(ObjId, usize)> = schema
        .object_ids()
        .flat_map(|s| (0..delta.size(s)).map(move |x| (s, x)))
        .collect();
    let mut obj_base = vec![0; schema.num_objects()];
    let mut acc = 0;
    for s in schema.object_ids() {
        obj_base[s] = acc;
        acc += delta.size(s);
    }
    let mut mor_base = vec![0; schema.num_morphisms()];
    let mut morphisms = Vec::new();
    for f in schema.morphism_ids() {
        mor_base[f] = morphisms.len();
        morphisms.extend((0..delta.size(schema.src(f))).map(|x| (f, x)));
    }
    let labels = objects
        .iter()
        .map(|&(s, x)| format!("({},{})", schema.object_label(s), inst.rows(s)[x]))
        .collect();
    let arrows = morphisms
        .iter()
        .map(|&(f, x)| {
            let (s, t) = (schema.src(f), schema.tgt(f));
            Morphism::new(
                format!("({},{})", schema.morphism(f).label, inst.rows(s)[x]),
                obj_base[s] + x,
                obj_base[t] + delta.action(f)[x],
            )
        })
        .collect();
    let identities = objects
        .iter()
        .map(|&(s, x)| mor_base[schema.identity(s)] + x)
        .collect();
    let category = Arc::new(
        FinCategory::from_composition_fn(labels, arrows, identities, |g, f| {
            let (mg, _) = morphisms[g];
            let (mf, x) = morphisms[f];
            mor_base[schema.compose_unchecked(mg, mf)] + x
        })
        .expect("category of elements is a category"),
    );
    let projection = Functor::new_unchecked(
        category.clone(),
        schema.clone(),
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    );
    ElementsCategory {
        category,
        objects,
        morphisms,
        projection,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub object: ObjId,
    pub objects: usize,
    pub morphisms: usize,
    /// Every morphism in the fiber projects to the identity.
    pub projects_to_identity: bool,
    /// The fiber subcategory has only identities.
    pub discrete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub fibers: Vec<Fiber>,
    /// Each `(s, x)` and `f: s -> s'` have exactly one lift `(f, x)`.
    pub unique_lifts: bool,
    pub holds: bool,
}

pub fn check_opfibration_fibers(ec: &ElementsCategory) -> FiberReport {
    let p = &ec.projection;
    let schema = p.target();
    let cat = &ec.category;
    let fibers: Vec<Fiber> = schema
        .object_ids()
        .map(|c| {
            // π⁻¹(c): objects over c and morphisms over 1_c
            let (sub, _, morphisms) = cat
                .subcategory(|o| p.map_object(o) == c, |m| p.map_morphism(m) == schema.identity(c))
                .expect("preimage of an identity is closed");
            let projects_to_identity = morphisms.iter().all(|&m| p.map_morphism(m) == schema.identity(c));
            Fiber {
                object: c,
                objects: sub.num_objects(),
                morphisms: sub.num_morphisms(),
                projects_to_identity,
                discrete: sub.num_morphisms() == sub.num_objects(),
            }
        })
        .collect();
    let mut lifts: HashMap<(ObjId, MorId), usize> = HashMap::new();
    for m in cat.morphism_ids() {
        *lifts.entry((cat.src(m), p.map_morphism(m))).or_default() += 1;
    }
    let unique_lifts = cat.object_ids().all(|o| {
        schema
            .hom_from(p.map_object(o))
            .all(|f| lifts.get(&(o, f)) == Some(&1))
    });
    let holds = unique_lifts && fibers.iter().all(|f| f.projects_to_identity && f.discrete);
    FiberReport {
        fibers,
        unique_lifts,
        holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackSquareReport {
    pub objects: BijectionReport,
    pub morphisms: BijectionReport,
    /// The comparison map preserves endpoints, identities and composition.
    pub functorial: bool,
    pub holds: bool,
}

/// Checks `∫(ε∘F) ≅ S ×_T ∫ε` through `(s, x) ↦ (s, (F s, x))`.
pub fn verify_pullback_square(
    f: &Functor,
    delta: &Instance,
    eps: &Instance,
) -> Result<PullbackSquareReport, ElementsError> {
    if **f.target() != **eps.schema() || **f.source() != **delta.schema() {
        return Err(ElementsError::NotPullbackInstance);
    }
    let expected = eps.functor().pullback(f);
    let rows_match = f
        .source()
        .object_ids()
        .all(|s| delta.rows(s) == eps.rows(f.map_object(s)));
    if *delta.functor() != expected || !rows_match {
        return Err(ElementsError::NotPullbackInstance);
    }
    let int_delta = category_of_elements(delta);
    let int_eps = category_of_elements(eps);
    let fp = fiber_product(f, &int_eps.projection)?;
    let obj_index: HashMap<(ObjId, ObjId), usize> = fp.objects.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mor_index: HashMap<(MorId, MorId), usize> = fp.morphisms.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let obj_map: Vec<Option<usize>> = int_delta
        .objects
        .iter()
        .map(|&(s, x)| {
            let e = int_eps.object_of(f.map_object(s), x)?;
            obj_index.get(&(s, e)).copied()
        })
        .collect();
    let mor_map: Vec<Option<usize>> = int_delta
        .morphisms
        .iter()
        .map(|&(m, x)| {
            let e = int_eps.morphism_of(f.map_morphism(m), x)?;
            mor_index.get(&(m, e)).copied()
        })
        .collect();
    let functorial = obj_map.iter().all(Option::is_some)
        && mor_map.iter().all(Option::is_some)
        && Functor::new(
            int_delta.category.clone(),
            fp.category.clone(),
            obj_map.iter().map(|o| o.unwrap()).collect(),
            mor_map.iter().map(|m| m.unwrap()).collect(),
        )
        .is_ok();
    let objects = BijectionReport::from_mapping(fp.objects.len(), obj_map);
    let morphisms = BijectionReport::from_mapping(fp.morphisms.len(), mor_map);
    let holds = objects.holds && morphisms.holds && functorial;
    Ok(PullbackSquareReport {
        objects,
        morphisms,
        functorial,
        holds,
    })
}
