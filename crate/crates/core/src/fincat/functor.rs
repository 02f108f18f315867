use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCategory, Morphism, MorId, ObjId, RawCategory};
use super::{CategoryError, FunctorError};

/// A functor between finite categories, stored as object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl Functor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return Err(FunctorError::Arity);
        }
        if let Some(&o) = objects.iter().find(|&&o| o >= target.num_objects()) {
            return Err(FunctorError::UnknownObject(o));
        }
        if let Some(&m) = morphisms.iter().find(|&&m| m >= target.num_morphisms()) {
            return Err(FunctorError::UnknownMorphism(m));
        }
        for m in source.morphism_ids() {
            let image = target.morphism(morphisms[m]);
            if image.src != objects[source.src(m)] || image.tgt != objects[source.tgt(m)] {
                return Err(FunctorError::EndpointMismatch { morphism: m });
            }
        }
        for o in source.object_ids() {
            if morphisms[source.identity(o)] != target.identity(objects[o]) {
                return Err(FunctorError::IdentityNotPreserved { object: o });
            }
        }
        for (g, f, gf) in source.composable_pairs() {
            if target.compose(morphisms[g], morphisms[f]) != Some(morphisms[gf]) {
                return Err(FunctorError::CompositionNotPreserved { g, f });
            }
        }
        Ok(Functor {
            source,
            target,
            objects,
            morphisms,
        })
    }

    /// Builds a functor from maps already known to be functorial.
    pub(crate) fn new_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Self {
        debug_assert!(
            Functor::new(source.clone(), target.clone(), objects.clone(), morphisms.clone())
                .is_ok()
        );
        Functor {
            source,
            target,
            objects,
            morphisms,
        }
    }

    pub fn identity(cat: Arc<FinCategory>) -> Self {
        Functor {
            objects: cat.object_ids().collect(),
            morphisms: cat.morphism_ids().collect(),
            source: cat.clone(),
            target: cat,
        }
    }

    /// The functor sending everything to `object` and its identity.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, object: ObjId) -> Self {
        let id = target.identity(object);
        Functor {
            objects: vec![object; source.num_objects()],
            morphisms: vec![id; source.num_morphisms()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    pub fn map_object(&self, o: ObjId) -> ObjId {
        self.objects[o]
    }

    pub fn map_morphism(&self, m: MorId) -> MorId {
        self.morphisms[m]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Functor) -> Result<Functor, FunctorError> {
        if first.target != self.source {
            return Err(FunctorError::NotComposable);
        }
        Ok(Functor {
            source: first.source.clone(),
            target: self.target.clone(),
            objects: first.objects.iter().map(|&o| self.objects[o]).collect(),
            morphisms: first.morphisms.iter().map(|&m| self.morphisms[m]).collect(),
        })
    }

    /// Same maps viewed between the opposite categories.
    pub fn op(&self) -> Functor {
        Functor {
            source: Arc::new(self.source.op()),
            target: Arc::new(self.target.op()),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }

    pub fn to_raw(&self) -> RawFunctor {
        RawFunctor {
            source: self.source.to_raw(),
            target: self.target.to_raw(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }
}

/// JSON form of a functor with both categories inline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub source: RawCategory,
    pub target: RawCategory,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl TryFrom<RawFunctor> for Functor {
    type Error = FunctorError;

    fn try_from(raw: RawFunctor) -> Result<Self, Self::Error> {
        let source = FinCategory::try_from(raw.source)?;
        let target = FinCategory::try_from(raw.target)?;
        Functor::new(Arc::new(source), Arc::new(target), raw.objects, raw.morphisms)
    }
}

/// The pullback `A ×_T B` of two functors into a common category, with its
/// two projections. Objects and morphisms are pairs, listed in lexicographic
/// order.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(ObjId, ObjId)>,
    pub morphisms: Vec<(MorId, MorId)>,
    pub left: Functor,
    pub right: Functor,
}

pub fn fiber_product(f: &Functor, g: &Functor) -> Result<FiberProduct, FunctorError> {
    if **f.target() != **g.target() {
        return Err(FunctorError::NotComposable);
    }
    let a = f.source();
    let b = g.source();
    let mut objects = Vec::new();
    let mut object_index = vec![usize::MAX; a.num_objects() * b.num_objects()];
    for x in a.object_ids() {
        for y in b.object_ids() {
            if f.map_object(x) == g.map_object(y) {
                object_index[x * b.num_objects() + y] = objects.len();
                objects.push((x, y));
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut morphism_index = vec![usize::MAX; a.num_morphisms() * b.num_morphisms()];
    for m in a.morphism_ids() {
        for n in b.morphism_ids() {
            if f.map_morphism(m) == g.map_morphism(n) {
                morphism_index[m * b.num_morphisms() + n] = morphisms.len();
                morphisms.push((m, n));
            }
        }
    }
    let obj = |x: ObjId, y: ObjId| object_index[x * b.num_objects() + y];
    let mor = |m: MorId, n: MorId| morphism_index[m * b.num_morphisms() + n];
    let labels = objects
        .iter()
        .map(|&(x, y)| format!("({},{})", a.object_label(x), b.object_label(y)))
        .collect();
    let arrows = morphisms
        .iter()
        .map(|&(m, n)| {
            Morphism::new(
                format!("({},{})", a.morphism(m).label, b.morphism(n).label),
                obj(a.src(m), b.src(n)),
                obj(a.tgt(m), b.tgt(n)),
            )
        })
        .collect();
    let identities = objects
        .iter()
        .map(|&(x, y)| mor(a.identity(x), b.identity(y)))
        .collect();
    let mut composites = Vec::new();
    for (i, &(g1, g2)) in morphisms.iter().enumerate() {
        for (j, &(f1, f2)) in morphisms.iter().enumerate() {
            if let (Some(c1), Some(c2)) = (a.compose(g1, f1), b.compose(g2, f2)) {
                composites.push((i, j, mor(c1, c2)));
            }
        }
    }
    let category = Arc::new(
        FinCategory::new(labels, arrows, identities, composites)
            .map_err(|e: CategoryError| FunctorError::Category(e))?,
    );
    let left = Functor::new_unchecked(
        category.clone(),
        a.clone(),
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    );
    let right = Functor::new_unchecked(
        category.clone(),
        b.clone(),
        objects.iter().map(|p| p.1).collect(),
        morphisms.iter().map(|p| p.1).collect(),
    );
    Ok(FiberProduct {
        category,
        objects,
        morphisms,
        left,
        right,
    })
}
