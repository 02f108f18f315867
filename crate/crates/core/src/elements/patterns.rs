//! Built-in query shapes.

use std::sync::Arc;

use serde::Serialize;

use super::{category_of_elements, commuting_tops, has_lift, solve_lifting, ElementsError, Instance, LiftingProblem};
use crate::fincat::{enumerate_functors, free_category, Edge, FinCategory, Functor, MorId, Quiver};
use crate::library;

/// `A -> B <- C`. Morphisms: identities 0..3, then `a: A -> B` (3) and
/// `c: C -> B` (4).
pub fn walking_collider() -> FinCategory {
    let q = Quiver::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec![Edge::new("a", 0, 1), Edge::new("c", 2, 1)],
    )
    .expect("valid quiver");
    free_category(&q).expect("acyclic")
}

/// The inclusion of the three vertices `{A, B, C}` into the walking collider.
pub fn collider_pattern() -> Functor {
    let vertices = Arc::new(library::discrete(3));
    Functor::new(vertices, Arc::new(walking_collider()), vec![0, 1, 2], vec![0, 1, 2]).expect("object inclusion")
}

/// The schema of directed graphs: `s, t: E -> V`.
pub fn graph_schema() -> FinCategory {
    let q = Quiver::new(
        vec!["E".into(), "V".into()],
        vec![Edge::new("s", 0, 1), Edge::new("t", 0, 1)],
    )
    .expect("valid quiver");
    free_category(&q).expect("acyclic")
}

/// `V ↪ {E -s-> V}`.
pub fn source_edge_pattern() -> Functor {
    let q = Quiver::new(vec!["E".into(), "V".into()], vec![Edge::new("s", 0, 1)]).expect("valid quiver");
    let arrow = Arc::new(free_category(&q).expect("acyclic"));
    let point = Arc::new(library::discrete(1));
    Functor::new(point, arrow, vec![1], vec![1]).expect("vertex inclusion")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColliderMatch {
    pub a: String,
    pub b: String,
    pub c: String,
    pub rows: [u64; 3],
    pub edges: [String; 2],
    /// The two parents are joined by a morphism, so this is not an immorality.
    pub adjacent_parents: bool,
    pub solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColliderQueryReport {
    pub matches: Vec<ColliderMatch>,
    pub immoralities: usize,
}

/// Solves the collider lifting problem against `π_δ`. The bottom map ranges
/// over functors sending both generators to irreducible morphisms with the
/// parent `A` before `C` in object order; the top map over every choice of
/// rows commuting with it.
pub fn collider_query(inst: &Instance) -> Result<ColliderQueryReport, ElementsError> {
    let schema = inst.schema();
    let ec = category_of_elements(inst);
    let f = collider_pattern();
    let p = &ec.projection;
    let irreducible = schema.irreducible_morphisms();
    let joined = |x: usize, y: usize| {
        irreducible
            .iter()
            .any(|&m| (schema.src(m), schema.tgt(m)) == (x, y) || (schema.src(m), schema.tgt(m)) == (y, x))
    };
    let mut matches = Vec::new();
    for nu in enumerate_functors(f.target(), schema) {
        let (ea, ec_) = (nu.map_morphism(3), nu.map_morphism(4));
        let (a, b, c) = (nu.map_object(0), nu.map_object(1), nu.map_object(2));
        if !irreducible.contains(&ea) || !irreducible.contains(&ec_) || a >= c {
            continue;
        }
        for mu in commuting_tops(&f, p, &nu) {
            let lp = LiftingProblem::new(f.clone(), p.clone(), mu.clone(), nu.clone())?;
            let solutions = solve_lifting(&lp).len();
            if solutions == 0 {
                continue;
            }
            let row = |k: usize| {
                let (s, x) = ec.objects[mu.map_object(k)];
                inst.rows(s)[x]
            };
            let label = |m: MorId| schema.morphism(m).label.clone();
            matches.push(ColliderMatch {
                a: schema.object_label(a).to_string(),
                b: schema.object_label(b).to_string(),
                c: schema.object_label(c).to_string(),
                rows: [row(0), row(1), row(2)],
                edges: [label(ea), label(ec_)],
                adjacent_parents: joined(a, c),
                solutions,
            });
        }
    }
    let immoralities = matches.iter().filter(|m| !m.adjacent_parents).count();
    Ok(ColliderQueryReport { matches, immoralities })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceEdgeReport {
    pub morphism: String,
    /// `(vertex row, has an edge whose source it is)`.
    pub vertices: Vec<(u64, bool)>,
    pub holds: bool,
}

/// Asks, for every row of the target of `source`, for a lift of
/// `V ↪ {E -> V}` along `π_δ` with the arrow sent to `source`.
pub fn source_edge_query(inst: &Instance, source: MorId) -> Result<SourceEdgeReport, ElementsError> {
    let schema = inst.schema();
    if source >= schema.num_morphisms() || schema.is_identity(source) {
        return Err(ElementsError::UnknownMorphism(source.to_string()));
    }
    let ec = category_of_elements(inst);
    let f = source_edge_pattern();
    let (e, v) = (schema.src(source), schema.tgt(source));
    let nu = Functor::new(
        f.target().clone(),
        schema.clone(),
        vec![e, v],
        vec![schema.identity(e), schema.identity(v), source],
    )?;
    let mut vertices = Vec::new();
    for mu in commuting_tops(&f, &ec.projection, &nu) {
        let lp = LiftingProblem::new(f.clone(), ec.projection.clone(), mu.clone(), nu.clone())?;
        let (s, x) = ec.objects[mu.map_object(0)];
        vertices.push((inst.rows(s)[x], has_lift(&lp)));
    }
    let holds = vertices.iter().all(|v| v.1);
    Ok(SourceEdgeReport {
        morphism: schema.morphism(source).label.clone(),
        vertices,
        holds,
    })
}
