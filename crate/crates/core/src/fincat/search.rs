//! Backtracking enumeration of functors between finite categories.
//!
//! Objects are assigned first in ascending id order, then morphisms in
//! ascending id order. A composable triple `(g, f, g∘f)` is checked as soon
//! as the largest of its three ids is assigned, and a morphism whose
//! endpoints are both placed must have a non-empty candidate set. Solutions
//! come out in lexicographic order of `(object map, morphism map)`.

use std::ops::ControlFlow;
use std::sync::Arc;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::Functor;

/// Optional per-object and per-morphism restrictions on a functor search.
/// `None` means unrestricted.
#[derive(Debug, Clone)]
pub struct FunctorConstraints {
    pub objects: Vec<Option<Vec<ObjId>>>,
    pub morphisms: Vec<Option<Vec<MorId>>>,
}

impl FunctorConstraints {
    pub fn none(source: &FinCategory) -> Self {
        FunctorConstraints {
            objects: vec![None; source.num_objects()],
            morphisms: vec![None; source.num_morphisms()],
        }
    }

    /// Intersects the allowed set of `object` with `allowed`.
    pub fn restrict_object(&mut self, object: ObjId, allowed: &[ObjId]) {
        let slot = &mut self.objects[object];
        *slot = Some(match slot.take() {
            None => allowed.to_vec(),
            Some(prev) => prev.into_iter().filter(|o| allowed.contains(o)).collect(),
        });
    }

    pub fn restrict_morphism(&mut self, morphism: MorId, allowed: &[MorId]) {
        let slot = &mut self.morphisms[morphism];
        *slot = Some(match slot.take() {
            None => allowed.to_vec(),
            Some(prev) => prev.into_iter().filter(|m| allowed.contains(m)).collect(),
        });
    }
}

struct Search<'a> {
    source: &'a FinCategory,
    target: &'a FinCategory,
    constraints: &'a FunctorConstraints,
    // morphisms whose endpoints are both placed once object k is placed
    ready_after_object: Vec<Vec<MorId>>,
    // composable triples whose largest id is k
    triples_at: Vec<Vec<(MorId, MorId, MorId)>>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl<'a> Search<'a> {
    fn new(
        source: &'a FinCategory,
        target: &'a FinCategory,
        constraints: &'a FunctorConstraints,
    ) -> Self {
        let mut ready_after_object = vec![Vec::new(); source.num_objects()];
        for m in source.morphism_ids() {
            ready_after_object[source.src(m).max(source.tgt(m))].push(m);
        }
        let mut triples_at = vec![Vec::new(); source.num_morphisms()];
        for (g, f, gf) in source.composable_pairs() {
            triples_at[g.max(f).max(gf)].push((g, f, gf));
        }
        Search {
            source,
            target,
            constraints,
            ready_after_object,
            triples_at,
            objects: vec![usize::MAX; source.num_objects()],
            morphisms: vec![usize::MAX; source.num_morphisms()],
        }
    }

    fn morphism_candidates(&self, m: MorId) -> impl Iterator<Item = MorId> + '_ {
        let (s, t) = (self.source.src(m), self.source.tgt(m));
        let forced = self
            .source
            .is_identity(m)
            .then(|| self.target.identity(self.objects[s]));
        let allowed = self.constraints.morphisms[m].as_deref();
        self.target
            .hom(self.objects[s], self.objects[t])
            .iter()
            .copied()
            .filter(move |c| forced.is_none_or(|f| f == *c))
            .filter(move |c| allowed.is_none_or(|a| a.contains(c)))
    }

    fn objects_step<B>(
        &mut self,
        k: ObjId,
        visit: &mut impl FnMut(&[ObjId], &[MorId]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == self.source.num_objects() {
            return self.morphisms_step(0, visit);
        }
        let candidates: Vec<ObjId> = match &self.constraints.objects[k] {
            Some(allowed) => allowed
                .iter()
                .copied()
                .filter(|&o| o < self.target.num_objects())
                .collect(),
            None => self.target.object_ids().collect(),
        };
        for c in candidates {
            self.objects[k] = c;
            let feasible = self.ready_after_object[k]
                .iter()
                .all(|&m| self.morphism_candidates(m).next().is_some());
            if feasible {
                self.objects_step(k + 1, visit)?;
            }
        }
        self.objects[k] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn morphisms_step<B>(
        &mut self,
        k: MorId,
        visit: &mut impl FnMut(&[ObjId], &[MorId]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == self.source.num_morphisms() {
            return visit(&self.objects, &self.morphisms);
        }
        let candidates: Vec<MorId> = self.morphism_candidates(k).collect();
        for c in candidates {
            self.morphisms[k] = c;
            let consistent = self.triples_at[k].iter().all(|&(g, f, gf)| {
                self.target.compose(self.morphisms[g], self.morphisms[f]) == Some(self.morphisms[gf])
            });
            if consistent {
                self.morphisms_step(k + 1, visit)?;
            }
        }
        self.morphisms[k] = usize::MAX;
        ControlFlow::Continue(())
    }
}

/// Visits every functor `source -> target` allowed by `constraints` until the
/// visitor breaks.
pub fn search_functors<B>(
    source: &FinCategory,
    target: &FinCategory,
    constraints: &FunctorConstraints,
    mut visit: impl FnMut(&[ObjId], &[MorId]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    assert_eq!(constraints.objects.len(), source.num_objects());
    assert_eq!(constraints.morphisms.len(), source.num_morphisms());
    Search::new(source, target, constraints).objects_step(0, &mut visit)
}

pub fn enumerate_functors_with(
    source: &Arc<FinCategory>,
    target: &Arc<FinCategory>,
    constraints: &FunctorConstraints,
) -> Vec<Functor> {
    let mut out = Vec::new();
    let _ = search_functors::<()>(source, target, constraints, |objects, morphisms| {
        out.push(Functor::new_unchecked(
            source.clone(),
            target.clone(),
            objects.to_vec(),
            morphisms.to_vec(),
        ));
        ControlFlow::Continue(())
    });
    out
}

/// All functors `source -> target`, in lexicographic order.
pub fn enumerate_functors(source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> Vec<Functor> {
    enumerate_functors_with(source, target, &FunctorConstraints::none(source))
}

pub fn count_functors_with(
    source: &FinCategory,
    target: &FinCategory,
    constraints: &FunctorConstraints,
) -> usize {
    let mut n = 0;
    let _ = search_functors::<()>(source, target, constraints, |_, _| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}
