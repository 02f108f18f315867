use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::ElementsError;
use crate::fincat::{
    enumerate_functors, enumerate_functors_with, search_functors, FinCategory, Functor, FunctorConstraints,
};

/// A commutative square `p ∘ μ = ν ∘ f` with `f: A -> B`, `p: X -> Y`,
/// `μ: A -> X` and `ν: B -> Y`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    f: Functor,
    p: Functor,
    mu: Functor,
    nu: Functor,
}

impl LiftingProblem {
    pub fn new(f: Functor, p: Functor, mu: Functor, nu: Functor) -> Result<Self, ElementsError> {
        let same = |a: &Arc<FinCategory>, b: &Arc<FinCategory>| Arc::ptr_eq(a, b) || a == b;
        if !same(f.source(), mu.source())
            || !same(f.target(), nu.source())
            || !same(mu.target(), p.source())
            || !same(nu.target(), p.target())
        {
            return Err(ElementsError::Shape("lifting square categories do not line up".into()));
        }
        let a = f.source();
        let commutes = a.object_ids().all(|o| p.map_object(mu.map_object(o)) == nu.map_object(f.map_object(o)))
            && a.morphism_ids()
                .all(|m| p.map_morphism(mu.map_morphism(m)) == nu.map_morphism(f.map_morphism(m)));
        if !commutes {
            return Err(ElementsError::NonCommutingSquare);
        }
        Ok(LiftingProblem { f, p, mu, nu })
    }

    pub fn f(&self) -> &Functor {
        &self.f
    }

    pub fn p(&self) -> &Functor {
        &self.p
    }

    pub fn mu(&self) -> &Functor {
        &self.mu
    }

    pub fn nu(&self) -> &Functor {
        &self.nu
    }

    /// Candidate sets for `h`: `p ∘ h = ν` pointwise, and `h ∘ f = μ` on the
    /// image of `f`.
    fn constraints(&self) -> FunctorConstraints {
        let (b, x) = (self.f.target(), self.p.source());
        let mut c = FunctorConstraints::none(b);
        for o in b.object_ids() {
            let allowed: Vec<_> = x
                .object_ids()
                .filter(|&xo| self.p.map_object(xo) == self.nu.map_object(o))
                .collect();
            c.restrict_object(o, &allowed);
        }
        for m in b.morphism_ids() {
            let allowed: Vec<_> = x
                .morphism_ids()
                .filter(|&xm| self.p.map_morphism(xm) == self.nu.map_morphism(m))
                .collect();
            c.restrict_morphism(m, &allowed);
        }
        let a = self.f.source();
        for o in a.object_ids() {
            c.restrict_object(self.f.map_object(o), &[self.mu.map_object(o)]);
        }
        for m in a.morphism_ids() {
            c.restrict_morphism(self.f.map_morphism(m), &[self.mu.map_morphism(m)]);
        }
        c
    }
}

/// Every diagonal `h: B -> X` with `p ∘ h = ν` and `h ∘ f = μ`, in
/// lexicographic order of object then morphism assignments.
pub fn solve_lifting(lp: &LiftingProblem) -> Vec<Functor> {
    enumerate_functors_with(lp.f.target(), lp.p.source(), &lp.constraints())
}

pub fn has_lift(lp: &LiftingProblem) -> bool {
    search_functors(lp.f.target(), lp.p.source(), &lp.constraints(), |_, _| ControlFlow::Break(())).is_break()
}

/// Top maps `μ` completing `ν` to a commutative square.
pub fn commuting_tops(f: &Functor, p: &Functor, nu: &Functor) -> Vec<Functor> {
    let (a, x) = (f.source(), p.source());
    let mut c = FunctorConstraints::none(a);
    for o in a.object_ids() {
        let want = nu.map_object(f.map_object(o));
        let allowed: Vec<_> = x.object_ids().filter(|&xo| p.map_object(xo) == want).collect();
        c.restrict_object(o, &allowed);
    }
    for m in a.morphism_ids() {
        let want = nu.map_morphism(f.map_morphism(m));
        let allowed: Vec<_> = x.morphism_ids().filter(|&xm| p.map_morphism(xm) == want).collect();
        c.restrict_morphism(m, &allowed);
    }
    enumerate_functors_with(a, x, &c)
}

/// All commuting squares `(μ, ν)` for `f` against `p`, ν-major.
pub fn enumerate_squares(f: &Functor, p: &Functor) -> Vec<(Functor, Functor)> {
    let mut out = Vec::new();
    for nu in enumerate_functors(f.target(), p.target()) {
        for mu in commuting_tops(f, p, &nu) {
            out.push((mu, nu.clone()));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftingSide {
    /// `f` has the left lifting property with respect to `p`.
    Left,
    /// `p` has the right lifting property with respect to `f`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftingVerdict {
    pub side: LiftingSide,
    pub exhaustive: bool,
    pub squares: usize,
    pub solvable: usize,
    /// Indices (into the probe list or the exhaustive enumeration) of squares
    /// without a diagonal.
    pub failures: Vec<usize>,
    pub holds: bool,
}

/// Decides the lifting property of `f` against `p` over the given probe
/// squares, or over every commuting square when `probes` is `None`. Both
/// sides ask the same question; `side` only records the reading.
pub fn check_lifting_property(
    f: &Functor,
    p: &Functor,
    side: LiftingSide,
    probes: Option<&[(Functor, Functor)]>,
) -> Result<LiftingVerdict, ElementsError> {
    let exhaustive = probes.is_none();
    let owned;
    let squares = match probes {
        Some(s) => s,
        None => {
            owned = enumerate_squares(f, p);
            &owned[..]
        }
    };
    let mut failures = Vec::new();
    for (k, (mu, nu)) in squares.iter().enumerate() {
        let lp = LiftingProblem::new(f.clone(), p.clone(), mu.clone(), nu.clone())?;
        if !has_lift(&lp) {
            failures.push(k);
        }
    }
    Ok(LiftingVerdict {
        side,
        exhaustive,
        squares: squares.len(),
        solvable: squares.len() - failures.len(),
        holds: failures.is_empty(),
        failures,
    })
}
