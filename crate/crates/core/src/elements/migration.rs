use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{ElementsError, Instance};
use crate::fincat::{
    enumerate_set_transformations, BijectionReport, FinCategory, Functor, MorId, Morphism, ObjId, SetFunctor,
    SetTransformation,
};

/// A comma category `(F ↓ t)` or `(t ↓ F)`. Objects are `(s, u)`; morphisms
/// are `(σ, from, to)` for `σ: s -> s'` making the triangle commute.
#[derive(Debug, Clone)]
pub struct CommaCategory {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(ObjId, MorId)>,
    pub morphisms: Vec<(MorId, usize, usize)>,
}

impl CommaCategory {
    pub fn object_of(&self, s: ObjId, u: MorId) -> Option<usize> {
        self.objects.iter().position(|&o| o == (s, u))
    }
}

fn build_comma(
    s_cat: &FinCategory,
    objects: Vec<(ObjId, MorId)>,
    commutes: impl Fn(MorId, usize, usize) -> bool,
) -> CommaCategory {
    let mut morphisms = Vec::new();
    for (k, &(s, _)) in objects.iter().enumerate() {
        for (k2, &(s2, _)) in objects.iter().enumerate() {
            for &sigma in s_cat.hom(s, s2) {
                if commutes(sigma, k, k2) {
                    morphisms.push((sigma, k, k2));
                }
            }
        }
    }
    let index: HashMap<(MorId, usize, usize), usize> =
        morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let labels = objects
        .iter()
        .map(|&(s, u)| format!("({},{})", s_cat.object_label(s), u))
        .collect();
    let arrows = morphisms
        .iter()
        .map(|&(sigma, k, k2)| Morphism::new(s_cat.morphism(sigma).label.clone(), k, k2))
        .collect();
    let identities = objects
        .iter()
        .enumerate()
        .map(|(k, &(s, _))| index[&(s_cat.identity(s), k, k)])
        .collect();
    let category = FinCategory::from_composition_fn(labels, arrows, identities, |g, f| {
        let (sg, _, to) = morphisms[g];
        let (sf, from, _) = morphisms[f];
        index[&(s_cat.compose_unchecked(sg, sf), from, to)]
    })
    .expect("comma category is a category");
    CommaCategory {
        category: Arc::new(category),
        objects,
        morphisms,
    }
}

/// `(F ↓ t)`: objects `(s, u: F s -> t)`, morphisms `σ` with `u' ∘ F σ = u`.
pub fn comma_over(f: &Functor, t: ObjId) -> CommaCategory {
    let (s_cat, t_cat) = (f.source(), f.target());
    let objects: Vec<(ObjId, MorId)> = s_cat
        .object_ids()
        .flat_map(|s| t_cat.hom(f.map_object(s), t).iter().map(move |&u| (s, u)))
        .collect();
    let objs = objects.clone();
    build_comma(s_cat, objects, |sigma, k, k2| {
        t_cat.compose(objs[k2].1, f.map_morphism(sigma)) == Some(objs[k].1)
    })
}

/// `(t ↓ F)`: objects `(s, u: t -> F s)`, morphisms `σ` with `F σ ∘ u = u'`.
pub fn comma_under(f: &Functor, t: ObjId) -> CommaCategory {
    let (s_cat, t_cat) = (f.source(), f.target());
    let objects: Vec<(ObjId, MorId)> = s_cat
        .object_ids()
        .flat_map(|s| t_cat.hom(t, f.map_object(s)).iter().map(move |&u| (s, u)))
        .collect();
    let objs = objects.clone();
    build_comma(s_cat, objects, |sigma, k, k2| {
        t_cat.compose(f.map_morphism(sigma), objs[k].1) == Some(objs[k2].1)
    })
}

fn check_instance(f: &Functor, delta: &Instance) -> Result<(), ElementsError> {
    if **f.source() != **delta.schema() {
        return Err(ElementsError::Shape("instance is not over the functor's source".into()));
    }
    Ok(())
}

/// `Δ_F ε = ε ∘ F`, keeping the row ids of `ε`.
pub fn migrate_pullback(f: &Functor, eps: &Instance) -> Result<Instance, ElementsError> {
    if **f.target() != **eps.schema() {
        return Err(ElementsError::Shape("instance is not over the functor's target".into()));
    }
    let functor = eps.functor().pullback(f);
    let rows = f
        .source()
        .object_ids()
        .map(|s| eps.rows(f.map_object(s)).to_vec())
        .collect();
    Ok(Instance::with_rows(functor, rows))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    // the smaller root wins, so each class is rooted at its least member
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
    }
}

/// `Σ_F δ` with its unit `η: δ => Δ_F Σ_F δ`. Rows of `Σ_F δ(t)` are
/// numbered `0..k` by the least `(comma object, element)` in each class.
#[derive(Debug, Clone)]
pub struct LeftKan {
    pub instance: Instance,
    pub unit: SetTransformation,
    /// Members `(comma object, element)` of each class, per target object.
    pub classes: Vec<Vec<Vec<(usize, usize)>>>,
}

pub fn migrate_left_kan(f: &Functor, delta: &Instance) -> Result<LeftKan, ElementsError> {
    check_instance(f, delta)?;
    let (s_cat, t_cat) = (f.source(), f.target());
    let d = delta.functor();
    let commas: Vec<CommaCategory> = t_cat.object_ids().map(|t| comma_over(f, t)).collect();
    let mut classes = Vec::new();
    // class id of (comma object, element), per t
    let mut class_of: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    for comma in &commas {
        let mut slots = Vec::new();
        let mut slot_index = HashMap::new();
        for (k, &(s, _)) in comma.objects.iter().enumerate() {
            for x in 0..d.size(s) {
                slot_index.insert((k, x), slots.len());
                slots.push((k, x));
            }
        }
        let mut uf = UnionFind((0..slots.len()).collect());
        for &(sigma, k, k2) in &comma.morphisms {
            let s = comma.objects[k].0;
            for x in 0..d.size(s) {
                uf.union(slot_index[&(k, x)], slot_index[&(k2, d.action(sigma)[x])]);
            }
        }
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut map = HashMap::new();
        for (i, &slot) in slots.iter().enumerate() {
            let r = uf.find(i);
            let c = *root_class.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[c].push(slot);
            map.insert(slot, c);
        }
        classes.push(members);
        class_of.push(map);
    }
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let actions = t_cat
        .morphism_ids()
        .map(|g| {
            let (t, t2) = (t_cat.src(g), t_cat.tgt(g));
            classes[t]
                .iter()
                .map(|members| {
                    let (k, x) = members[0];
                    let (s, u) = commas[t].objects[k];
                    let k2 = commas[t2]
                        .object_of(s, t_cat.compose_unchecked(g, u))
                        .expect("postcomposition stays in the comma category");
                    class_of[t2][&(k2, x)]
                })
                .collect()
        })
        .collect();
    let functor = SetFunctor::new(t_cat.clone(), sizes, actions).map_err(|e| ElementsError::Shape(e.to_string()))?;
    let unit = s_cat
        .object_ids()
        .map(|s| {
            let t = f.map_object(s);
            let k = commas[t].object_of(s, t_cat.identity(t)).unwrap();
            (0..d.size(s)).map(|x| class_of[t][&(k, x)]).collect()
        })
        .collect();
    Ok(LeftKan {
        instance: Instance::from_set_functor(functor),
        unit,
        classes,
    })
}

/// `Π_F δ` with its counit `Δ_F Π_F δ => δ`. Rows of `Π_F δ(t)` are the
/// compatible families over `(t ↓ F)`, numbered in lexicographic order.
#[derive(Debug, Clone)]
pub struct RightKan {
    pub instance: Instance,
    pub counit: SetTransformation,
    /// Family `x_k ∈ δ(s_k)` for each comma object `k`, per target object.
    pub families: Vec<Vec<Vec<usize>>>,
    pub commas: Vec<CommaCategory>,
}

fn compatible_families(comma: &CommaCategory, d: &SetFunctor) -> Vec<Vec<usize>> {
    let n = comma.objects.len();
    // constraints checked once both ends are assigned
    let mut checks: Vec<Vec<(MorId, usize, usize)>> = vec![Vec::new(); n];
    for &(sigma, k, k2) in &comma.morphisms {
        checks[k.max(k2)].push((sigma, k, k2));
    }
    let mut out = Vec::new();
    let mut family = vec![0; n];
    fn rec(
        i: usize,
        comma: &CommaCategory,
        d: &SetFunctor,
        checks: &[Vec<(MorId, usize, usize)>],
        family: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == comma.objects.len() {
            out.push(family.clone());
            return;
        }
        for x in 0..d.size(comma.objects[i].0) {
            family[i] = x;
            if checks[i].iter().all(|&(sigma, k, k2)| d.action(sigma)[family[k]] == family[k2]) {
                rec(i + 1, comma, d, checks, family, out);
            }
        }
    }
    rec(0, comma, d, &checks, &mut family, &mut out);
    out
}

pub fn migrate_right_kan(f: &Functor, delta: &Instance) -> Result<RightKan, ElementsError> {
    check_instance(f, delta)?;
    let (s_cat, t_cat) = (f.source(), f.target());
    let d = delta.functor();
    let commas: Vec<CommaCategory> = t_cat.object_ids().map(|t| comma_under(f, t)).collect();
    let families: Vec<Vec<Vec<usize>>> = commas.iter().map(|c| compatible_families(c, d)).collect();
    let index: Vec<HashMap<&Vec<usize>, usize>> = families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, v)| (v, i)).collect())
        .collect();
    let actions = t_cat
        .morphism_ids()
        .map(|g| {
            let (t, t2) = (t_cat.src(g), t_cat.tgt(g));
            families[t]
                .iter()
                .map(|fam| {
                    let image: Vec<usize> = commas[t2]
                        .objects
                        .iter()
                        .map(|&(s, u2)| {
                            let k = commas[t]
                                .object_of(s, t_cat.compose_unchecked(u2, g))
                                .expect("precomposition stays in the comma category");
                            fam[k]
                        })
                        .collect();
                    index[t2][&image]
                })
                .collect()
        })
        .collect();
    let sizes = families.iter().map(Vec::len).collect();
    let functor = SetFunctor::new(t_cat.clone(), sizes, actions).map_err(|e| ElementsError::Shape(e.to_string()))?;
    let counit = s_cat
        .object_ids()
        .map(|s| {
            let t = f.map_object(s);
            let k = commas[t].object_of(s, t_cat.identity(t)).unwrap();
            families[t].iter().map(|fam| fam[k]).collect()
        })
        .collect();
    Ok(RightKan {
        instance: Instance::from_set_functor(functor),
        counit,
        families,
        commas,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    /// `Hom_T(Σ_F δ, ε) -> Hom_S(δ, Δ_F ε)`, `α ↦ Δ_F(α) ∘ η`.
    pub sigma_delta: BijectionReport,
    /// `Hom_T(ε, Π_F δ) -> Hom_S(Δ_F ε, δ)`, `β ↦ counit ∘ Δ_F(β)`.
    pub delta_pi: BijectionReport,
    pub holds: bool,
}

fn transformation_index(list: &[SetTransformation]) -> HashMap<&SetTransformation, usize> {
    list.iter().enumerate().map(|(i, a)| (a, i)).collect()
}

/// Checks `Σ_F ⊣ Δ_F ⊣ Π_F` at `δ` over `S` and `ε` over `T` by enumerating
/// both hom-sets of each adjunction and the explicit transposition maps.
pub fn check_adjunction(f: &Functor, delta: &Instance, eps: &Instance) -> Result<AdjunctionReport, ElementsError> {
    check_instance(f, delta)?;
    let s_cat = f.source();
    let pulled = migrate_pullback(f, eps)?;
    let (d, e, de) = (delta.functor(), eps.functor(), pulled.functor());

    let sigma = migrate_left_kan(f, delta)?;
    let left = enumerate_set_transformations(sigma.instance.functor(), e);
    let right = enumerate_set_transformations(d, de);
    let right_index = transformation_index(&right);
    let mapping = left
        .iter()
        .map(|alpha| {
            let phi: SetTransformation = s_cat
                .object_ids()
                .map(|s| sigma.unit[s].iter().map(|&c| alpha[f.map_object(s)][c]).collect())
                .collect();
            right_index.get(&phi).copied()
        })
        .collect();
    let sigma_delta = BijectionReport::from_mapping(right.len(), mapping);

    let pi = migrate_right_kan(f, delta)?;
    let left = enumerate_set_transformations(e, pi.instance.functor());
    let right = enumerate_set_transformations(de, d);
    let right_index = transformation_index(&right);
    let mapping = left
        .iter()
        .map(|beta| {
            let psi: SetTransformation = s_cat
                .object_ids()
                .map(|s| {
                    let t = f.map_object(s);
                    (0..e.size(t)).map(|y| pi.counit[s][beta[t][y]]).collect()
                })
                .collect();
            right_index.get(&psi).copied()
        })
        .collect();
    let delta_pi = BijectionReport::from_mapping(right.len(), mapping);
    let holds = sigma_delta.holds && delta_pi.holds;
    Ok(AdjunctionReport {
        sigma_delta,
        delta_pi,
        holds,
    })
}
