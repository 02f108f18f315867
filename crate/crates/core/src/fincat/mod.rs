//! Finite categories, functors, natural transformations and the
//! universal-arrow / Yoneda verification machinery.
//!
//! Everything here is exhaustive: categories are small enough that laws are
//! checked on every composable tuple and hom-sets are enumerated outright.
//! Enumeration order is ascending id order throughout, so "first witness"
//! results are deterministic.

mod category;
mod functor;
mod natural;
mod quiver;
mod search;

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use category::{FinCategory, MorId, Morphism, ObjId, RawCategory, RawMorphism, RawObject};
pub use functor::{fiber_product, FiberProduct, Functor, RawFunctor};
pub use natural::{
    check_universal_arrow, crp_check, enumerate_nat_transformations,
    enumerate_set_transformations, is_retract, is_set_transformation, yoneda_check,
    BijectionReport, NatTransformation, SetFunctor, SetFunctorError, SetTransformation,
    UniversalArrowCandidate, UniversalityVerdict,
};
pub use quiver::{free_category, free_category_with_paths, Edge, FreeCategory, Quiver, RawQuiver};
pub use search::{
    count_functors_with, enumerate_functors, enumerate_functors_with, search_functors,
    FunctorConstraints,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("morphism {morphism} refers to unknown object {object}")]
    UnknownObject { morphism: MorId, object: ObjId },
    #[error("unknown morphism id {0}")]
    UnknownMorphism(MorId),
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: usize },
    #[error("{kind} id {id} is not dense (ids must be 0..n-1)")]
    NonDenseId { kind: &'static str, id: usize },
    #[error("expected {expected} identities, found {found}")]
    IdentityCount { expected: usize, found: usize },
    #[error("object {object} has no identity")]
    MissingIdentity { object: ObjId },
    #[error("identity given for unknown object {object}")]
    UnknownIdentityObject { object: ObjId },
    #[error("identity law fails at morphism {morphism}")]
    BadIdentity { morphism: MorId },
    #[error("composite listed for non-composable pair ({g}, {f})")]
    NotComposable { g: MorId, f: MorId },
    #[error("composite {composite} of ({g}, {f}) has the wrong source or target")]
    CompositeTypeMismatch { g: MorId, f: MorId, composite: MorId },
    #[error("conflicting composites listed for ({g}, {f})")]
    ConflictingComposite { g: MorId, f: MorId },
    #[error("composable pair ({g}, {f}) has no composite")]
    MissingComposite { g: MorId, f: MorId },
    #[error("associativity fails at ({h}, {g}, {f})")]
    NonAssociative { h: MorId, g: MorId, f: MorId },
    #[error("quiver has a directed cycle through vertices {cycle:?}")]
    CyclicQuiver { cycle: Vec<usize> },
    #[error("selection is not closed: morphism {morphism} is needed but excluded")]
    NotClosed { morphism: MorId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("map sizes do not match the source category")]
    Arity,
    #[error("unknown object {0} in target")]
    UnknownObject(ObjId),
    #[error("unknown morphism {0} in target")]
    UnknownMorphism(MorId),
    #[error("image of morphism {morphism} has the wrong endpoints")]
    EndpointMismatch { morphism: MorId },
    #[error("identity of object {object} is not preserved")]
    IdentityNotPreserved { object: ObjId },
    #[error("composite of ({g}, {f}) is not preserved")]
    CompositionNotPreserved { g: MorId, f: MorId },
    #[error("functors are not composable")]
    NotComposable,
    #[error("functors do not share source and target")]
    NotParallel,
    #[error("naturality fails at morphism {morphism}")]
    NotNatural { morphism: MorId },
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Outcome of checking that every quiver map `Q -> U(D)` factors uniquely
/// through the unit `Q -> U(Free(Q))` as `U(F) ∘ u` for a functor `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeFactorizationReport {
    pub quiver_maps: usize,
    pub unique: usize,
    /// First quiver map (vertex images, edge images) without a unique
    /// factorization, with its number of factorizations.
    pub failure: Option<(Vec<ObjId>, Vec<MorId>, usize)>,
}

impl FreeFactorizationReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Finite surrogate of the free-category / underlying-graph universal arrow:
/// enumerates every quiver homomorphism `q -> U(d)` and counts functors
/// `Free(q) -> d` that restrict to it along the unit embedding.
pub fn check_free_universal_property(
    q: &Quiver,
    d: &Arc<FinCategory>,
) -> Result<FreeFactorizationReport, CategoryError> {
    let free = free_category_with_paths(q)?;
    let source = free.category.clone();
    let nv = q.vertices().len();
    let ne = q.edges().len();
    let mut report = FreeFactorizationReport {
        quiver_maps: 0,
        unique: 0,
        failure: None,
    };
    let mut vertex_map = vec![0usize; nv];
    let mut edge_map = vec![0usize; ne];

    // odometer over vertex maps, then over compatible edge maps
    let mut done_vertices = nv > 0 && d.num_objects() == 0;
    while !done_vertices {
        let edge_choices: Vec<&[MorId]> = q
            .edges()
            .iter()
            .map(|e| d.hom(vertex_map[e.src], vertex_map[e.tgt]))
            .collect();
        if edge_choices.iter().all(|c| !c.is_empty()) {
            let mut pos = vec![0usize; ne];
            loop {
                for e in 0..ne {
                    edge_map[e] = edge_choices[e][pos[e]];
                }
                report.quiver_maps += 1;
                let mut constraints = FunctorConstraints::none(&source);
                for v in 0..nv {
                    constraints.objects[v] = Some(vec![vertex_map[v]]);
                }
                for e in 0..ne {
                    constraints.morphisms[free.edge_morphism(e)] = Some(vec![edge_map[e]]);
                }
                let mut count = 0usize;
                let _ = search_functors::<()>(&source, d, &constraints, |_, _| {
                    count += 1;
                    if count > 1 {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                });
                if count == 1 {
                    report.unique += 1;
                } else if report.failure.is_none() {
                    report.failure = Some((vertex_map.clone(), edge_map.clone(), count));
                }
                if !advance(&mut pos, |e| edge_choices[e].len()) {
                    break;
                }
            }
        }
        done_vertices = !advance(&mut vertex_map, |_| d.num_objects());
    }
    Ok(report)
}

// Little-endian odometer step; false once it wraps around.
fn advance(digits: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for i in 0..digits.len() {
        digits[i] += 1;
        if digits[i] < base(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests;
