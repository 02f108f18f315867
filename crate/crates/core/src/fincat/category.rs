use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::CategoryError;

/// Object ids are dense indices `0..num_objects`.
pub type ObjId = usize;
/// Morphism ids are dense indices `0..num_morphisms`.
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub label: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

impl Morphism {
    pub fn new(label: impl Into<String>, src: ObjId, tgt: ObjId) -> Self {
        Morphism {
            label: label.into(),
            src,
            tgt,
        }
    }
}

/// A finite category given by an explicit composition table.
///
/// Values are only obtainable through validation, so every `FinCategory`
/// satisfies the identity and associativity laws on all composable tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    // row-major on (g, f): composition[g * n + f] = g ∘ f
    composition: Vec<Option<MorId>>,
    // hom[a * n_obj + b] = ascending morphism ids a -> b
    hom: Vec<Vec<MorId>>,
}

impl FinCategory {
    /// Validates the tables of a category. `composites` lists `(g, f, g∘f)`
    /// and must cover exactly the composable pairs.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        composites: impl IntoIterator<Item = (MorId, MorId, MorId)>,
    ) -> Result<Self, CategoryError> {
        let n_obj = objects.len();
        let n_mor = morphisms.len();
        for (id, m) in morphisms.iter().enumerate() {
            for object in [m.src, m.tgt] {
                if object >= n_obj {
                    return Err(CategoryError::UnknownObject { morphism: id, object });
                }
            }
        }
        if identities.len() != n_obj {
            return Err(CategoryError::IdentityCount {
                expected: n_obj,
                found: identities.len(),
            });
        }
        for (object, &id) in identities.iter().enumerate() {
            if id >= n_mor {
                return Err(CategoryError::UnknownMorphism(id));
            }
            let m = &morphisms[id];
            if m.src != object || m.tgt != object {
                return Err(CategoryError::BadIdentity { morphism: id });
            }
        }

        let mut composition = vec![None; n_mor * n_mor];
        for (g, f, gf) in composites {
            for id in [g, f, gf] {
                if id >= n_mor {
                    return Err(CategoryError::UnknownMorphism(id));
                }
            }
            if morphisms[g].src != morphisms[f].tgt {
                return Err(CategoryError::NotComposable { g, f });
            }
            if morphisms[gf].src != morphisms[f].src || morphisms[gf].tgt != morphisms[g].tgt {
                return Err(CategoryError::CompositeTypeMismatch { g, f, composite: gf });
            }
            let slot = &mut composition[g * n_mor + f];
            match slot {
                Some(existing) if *existing != gf => {
                    return Err(CategoryError::ConflictingComposite { g, f });
                }
                _ => *slot = Some(gf),
            }
        }

        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for (id, m) in morphisms.iter().enumerate() {
            hom[m.src * n_obj + m.tgt].push(id);
        }

        let cat = FinCategory {
            objects,
            morphisms,
            identities,
            composition,
            hom,
        };
        cat.audit()?;
        Ok(cat)
    }

    /// Builds the composition table from a closure defined on composable pairs.
    pub fn from_composition_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> MorId,
    ) -> Result<Self, CategoryError> {
        let mut composites = Vec::new();
        for g in 0..morphisms.len() {
            for f in 0..morphisms.len() {
                if morphisms[g].src == morphisms[f].tgt {
                    composites.push((g, f, compose(g, f)));
                }
            }
        }
        Self::new(objects, morphisms, identities, composites)
    }

    fn audit(&self) -> Result<(), CategoryError> {
        for g in self.morphism_ids() {
            for f in self.morphism_ids() {
                if self.morphisms[g].src == self.morphisms[f].tgt && self.compose(g, f).is_none() {
                    return Err(CategoryError::MissingComposite { g, f });
                }
            }
        }
        for f in self.morphism_ids() {
            let m = &self.morphisms[f];
            if self.compose(self.identities[m.tgt], f) != Some(f)
                || self.compose(f, self.identities[m.src]) != Some(f)
            {
                return Err(CategoryError::BadIdentity { morphism: f });
            }
        }
        for f in self.morphism_ids() {
            for g in self.hom_from(self.morphisms[f].tgt) {
                let gf = self.compose_unchecked(g, f);
                for h in self.hom_from(self.morphisms[g].tgt) {
                    let left = self.compose_unchecked(h, gf);
                    let right = self.compose_unchecked(self.compose_unchecked(h, g), f);
                    if left != right {
                        return Err(CategoryError::NonAssociative { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn morphism_ids(&self) -> std::ops::Range<MorId> {
        0..self.morphisms.len()
    }

    pub fn object_label(&self, object: ObjId) -> &str {
        &self.objects[object]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, id: MorId) -> &Morphism {
        &self.morphisms[id]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn src(&self, id: MorId) -> ObjId {
        self.morphisms[id].src
    }

    pub fn tgt(&self, id: MorId) -> ObjId {
        self.morphisms[id].tgt
    }

    pub fn identity(&self, object: ObjId) -> MorId {
        self.identities[object]
    }

    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }

    pub fn is_identity(&self, id: MorId) -> bool {
        self.identities[self.morphisms[id].src] == id
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.composition[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn compose_unchecked(&self, g: MorId, f: MorId) -> MorId {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    /// Ascending ids of the morphisms `a -> b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.objects.len() + b]
    }

    /// All morphisms with source `a`, ascending.
    pub fn hom_from(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphism_ids().filter(move |&m| self.morphisms[m].src == a)
    }

    /// All morphisms with target `b`, ascending.
    pub fn hom_to(&self, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphism_ids().filter(move |&m| self.morphisms[m].tgt == b)
    }

    /// Composable pairs `(g, f)` with their composite, in ascending `(g, f)` order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId, MorId)> + '_ {
        let n = self.morphisms.len();
        self.composition
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.map(|gf| (k / n, k % n, gf)))
    }

    /// The opposite category. Morphism ids are preserved; sources and targets
    /// swap and the composition table is transposed.
    pub fn op(&self) -> FinCategory {
        let n_obj = self.objects.len();
        let n_mor = self.morphisms.len();
        let morphisms: Vec<Morphism> = self
            .morphisms
            .iter()
            .map(|m| Morphism::new(m.label.clone(), m.tgt, m.src))
            .collect();
        let mut composition = vec![None; n_mor * n_mor];
        for (g, f, gf) in self.composable_pairs() {
            composition[f * n_mor + g] = Some(gf);
        }
        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for (id, m) in morphisms.iter().enumerate() {
            hom[m.src * n_obj + m.tgt].push(id);
        }
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            composition,
            hom,
        }
    }

    /// Restricts to the given objects and morphisms. Returns the subcategory
    /// together with the old ids of its objects and morphisms.
    pub fn subcategory(
        &self,
        keep_object: impl Fn(ObjId) -> bool,
        keep_morphism: impl Fn(MorId) -> bool,
    ) -> Result<(FinCategory, Vec<ObjId>, Vec<MorId>), CategoryError> {
        let objects: Vec<ObjId> = self.object_ids().filter(|&o| keep_object(o)).collect();
        let mut new_obj = vec![usize::MAX; self.num_objects()];
        for (new, &old) in objects.iter().enumerate() {
            new_obj[old] = new;
        }
        let morphisms: Vec<MorId> = self
            .morphism_ids()
            .filter(|&m| {
                self.is_identity(m) && new_obj[self.src(m)] != usize::MAX
                    || keep_morphism(m)
            })
            .collect();
        let mut new_mor = vec![usize::MAX; self.num_morphisms()];
        for (new, &old) in morphisms.iter().enumerate() {
            let m = &self.morphisms[old];
            if new_obj[m.src] == usize::MAX || new_obj[m.tgt] == usize::MAX {
                return Err(CategoryError::NotClosed { morphism: old });
            }
            new_mor[old] = new;
        }
        let mut composites = Vec::new();
        for &g in &morphisms {
            for &f in &morphisms {
                if let Some(gf) = self.compose(g, f) {
                    if new_mor[gf] == usize::MAX {
                        return Err(CategoryError::NotClosed { morphism: gf });
                    }
                    composites.push((new_mor[g], new_mor[f], new_mor[gf]));
                }
            }
        }
        let sub = FinCategory::new(
            objects.iter().map(|&o| self.objects[o].clone()).collect(),
            morphisms
                .iter()
                .map(|&m| {
                    let old = &self.morphisms[m];
                    Morphism::new(old.label.clone(), new_obj[old.src], new_obj[old.tgt])
                })
                .collect(),
            objects.iter().map(|&o| new_mor[self.identities[o]]).collect(),
            composites,
        )?;
        Ok((sub, objects, morphisms))
    }

    /// Non-identity morphisms that are not a composite of two non-identity
    /// morphisms. For free categories these are exactly the generating edges.
    pub fn irreducible_morphisms(&self) -> Vec<MorId> {
        let mut composite = vec![false; self.num_morphisms()];
        for (g, f, gf) in self.composable_pairs() {
            if !self.is_identity(g) && !self.is_identity(f) {
                composite[gf] = true;
            }
        }
        self.morphism_ids()
            .filter(|&m| !self.is_identity(m) && !composite[m])
            .collect()
    }

    /// First object `t` with exactly one morphism `c -> t` from every `c`.
    pub fn terminal_object(&self) -> Option<ObjId> {
        self.object_ids()
            .find(|&t| self.object_ids().all(|c| self.hom(c, t).len() == 1))
    }

    pub fn initial_object(&self) -> Option<ObjId> {
        self.object_ids()
            .find(|&i| self.object_ids().all(|c| self.hom(i, c).len() == 1))
    }

    /// Finds an object or morphism by label, falling back to a numeric id.
    pub fn find_object(&self, key: &str) -> Option<ObjId> {
        self.objects
            .iter()
            .position(|l| l == key)
            .or_else(|| key.parse().ok().filter(|&id: &usize| id < self.objects.len()))
    }

    pub fn find_morphism(&self, key: &str) -> Option<MorId> {
        self.morphisms
            .iter()
            .position(|m| m.label == key)
            .or_else(|| key.parse().ok().filter(|&id: &usize| id < self.morphisms.len()))
    }

    pub fn to_raw(&self) -> RawCategory {
        RawCategory {
            objects: self
                .objects
                .iter()
                .enumerate()
                .map(|(id, label)| RawObject {
                    id,
                    label: label.clone(),
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .enumerate()
                .map(|(id, m)| RawMorphism {
                    id,
                    label: m.label.clone(),
                    src: m.src,
                    tgt: m.tgt,
                })
                .collect(),
            identities: self.identities.iter().copied().enumerate().collect(),
            composition: self.composable_pairs().map(|(g, f, gf)| [g, f, gf]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawObject {
    pub id: usize,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: usize,
    #[serde(default)]
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// JSON form of a category:
/// `{"objects":[{"id","label"}], "morphisms":[{"id","label","src","tgt"}],
///   "identities":{objId:morId}, "composition":[[g,f,gf],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<RawObject>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<usize, usize>,
    pub composition: Vec<[usize; 3]>,
}

pub(crate) fn dense_order<T>(
    items: &[T],
    id: impl Fn(&T) -> usize,
    kind: &'static str,
) -> Result<Vec<usize>, CategoryError> {
    let mut slot = vec![usize::MAX; items.len()];
    let mut seen = HashSet::new();
    for (pos, item) in items.iter().enumerate() {
        let id = id(item);
        if !seen.insert(id) {
            return Err(CategoryError::DuplicateId { kind, id });
        }
        if id >= items.len() {
            return Err(CategoryError::NonDenseId { kind, id });
        }
        slot[id] = pos;
    }
    Ok(slot)
}

impl TryFrom<RawCategory> for FinCategory {
    type Error = CategoryError;

    fn try_from(raw: RawCategory) -> Result<Self, Self::Error> {
        let obj_order = dense_order(&raw.objects, |o| o.id, "object")?;
        let mor_order = dense_order(&raw.morphisms, |m| m.id, "morphism")?;
        let objects = obj_order
            .iter()
            .map(|&p| {
                let o = &raw.objects[p];
                if o.label.is_empty() {
                    o.id.to_string()
                } else {
                    o.label.clone()
                }
            })
            .collect();
        let morphisms = mor_order
            .iter()
            .map(|&p| {
                let m = &raw.morphisms[p];
                let label = if m.label.is_empty() {
                    m.id.to_string()
                } else {
                    m.label.clone()
                };
                Morphism::new(label, m.src, m.tgt)
            })
            .collect();
        let mut identities = Vec::with_capacity(raw.objects.len());
        for object in 0..raw.objects.len() {
            match raw.identities.get(&object) {
                Some(&id) => identities.push(id),
                None => return Err(CategoryError::MissingIdentity { object }),
            }
        }
        if let Some((&object, _)) = raw.identities.iter().find(|(&o, _)| o >= raw.objects.len()) {
            return Err(CategoryError::UnknownIdentityObject { object });
        }
        FinCategory::new(
            objects,
            morphisms,
            identities,
            raw.composition.iter().map(|&[g, f, gf]| (g, f, gf)),
        )
    }
}
