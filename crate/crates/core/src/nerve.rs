//! The nerve of a finite category.
//!
//! An n-simplex is a chain `C_0 -f_1-> C_1 -> … -f_n-> C_n` of composable
//! morphisms. `d_0` drops the first arrow, `d_n` the last, an inner `d_i`
//! replaces `f_i, f_{i+1}` by `f_{i+1} ∘ f_i`, and `s_i` inserts `1_{C_i}`.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{enumerate_functors, BijectionReport, FinCategory, Functor, MorId, ObjId};
use crate::simplex::{enumerate_simplicial_maps, RawSSet, SimplicialMap, TruncatedSSet};

/// Largest categories accepted by the full-faithfulness check.
pub const MAX_CHECK_OBJECTS: usize = 4;
pub const MAX_CHECK_MORPHISMS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("face index {index} out of range for a chain of length {length}")]
    IndexOutOfRange { index: usize, length: usize },
    #[error("category with {objects} objects and {morphisms} morphisms exceeds the check scale")]
    ScaleExceeded { objects: usize, morphisms: usize },
}

/// A chain of composable morphisms starting at `start`. The empty chain is
/// the vertex `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chain {
    pub start: ObjId,
    pub arrows: Vec<MorId>,
}

impl Chain {
    pub fn vertex(object: ObjId) -> Self {
        Chain {
            start: object,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `C_k`, the k-th object along the chain.
    pub fn object(&self, cat: &FinCategory, k: usize) -> ObjId {
        if k == 0 {
            self.start
        } else {
            cat.tgt(self.arrows[k - 1])
        }
    }
}

pub fn apply_face_to_chain(cat: &FinCategory, chain: &Chain, i: usize) -> Result<Chain, NerveError> {
    let n = chain.len();
    if n == 0 || i > n {
        return Err(NerveError::IndexOutOfRange { index: i, length: n });
    }
    let mut arrows = chain.arrows.clone();
    let start = if i == 0 {
        cat.tgt(arrows.remove(0))
    } else {
        if i == n {
            arrows.pop();
        } else {
            let composite = cat.compose_unchecked(arrows[i], arrows[i - 1]);
            arrows.splice(i - 1..=i, [composite]);
        }
        chain.start
    };
    Ok(Chain { start, arrows })
}

pub fn apply_degeneracy_to_chain(cat: &FinCategory, chain: &Chain, j: usize) -> Chain {
    let mut arrows = chain.arrows.clone();
    arrows.insert(j, cat.identity(chain.object(cat, j)));
    Chain {
        start: chain.start,
        arrows,
    }
}

/// All chains of length `0..=truncation`, each level ordered by extending the
/// previous level's chains with outgoing morphisms in id order.
pub fn enumerate_chains(cat: &FinCategory, truncation: usize) -> Vec<Vec<Chain>> {
    let mut levels: Vec<Vec<Chain>> = vec![cat.object_ids().map(Chain::vertex).collect()];
    for n in 1..=truncation {
        let next = levels[n - 1]
            .iter()
            .flat_map(|c| {
                let end = c.object(cat, c.len());
                cat.hom_from(end).map(move |m| {
                    let mut arrows = c.arrows.clone();
                    arrows.push(m);
                    Chain {
                        start: c.start,
                        arrows,
                    }
                })
            })
            .collect();
        levels.push(next);
    }
    levels
}

#[derive(Debug, Clone)]
pub struct NerveResult {
    pub category: Arc<FinCategory>,
    pub sset: TruncatedSSet,
    pub chains: Vec<Vec<Chain>>,
}

impl NerveResult {
    pub fn simplex_of(&self, chain: &Chain) -> Option<usize> {
        self.chains.get(chain.len())?.iter().position(|c| c == chain)
    }

    pub fn to_raw(&self) -> RawNerve {
        RawNerve {
            sset: self.sset.to_raw(),
            chains: self.chains.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawNerve {
    #[serde(flatten)]
    pub sset: RawSSet,
    pub chains: Vec<Vec<Chain>>,
}

pub fn nerve(cat: &Arc<FinCategory>, truncation: usize) -> NerveResult {
    let chains = enumerate_chains(cat, truncation);
    let labels = chains
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|c| {
                    if c.is_empty() {
                        cat.object_label(c.start).to_string()
                    } else {
                        let names: Vec<&str> = c.arrows.iter().map(|&m| cat.morphism(m).label.as_str()).collect();
                        names.join(",")
                    }
                })
                .collect()
        })
        .collect();
    let sset = TruncatedSSet::from_simplices(
        truncation,
        chains.clone(),
        |_, c, i| apply_face_to_chain(cat, c, i).expect("face index in range"),
        |_, c, j| apply_degeneracy_to_chain(cat, c, j),
    )
    .expect("nerve satisfies the simplicial identities")
    .with_labels(labels);
    NerveResult {
        category: cat.clone(),
        sset,
        chains,
    }
}

fn check_scale(c: &FinCategory) -> Result<(), NerveError> {
    if c.num_objects() > MAX_CHECK_OBJECTS || c.num_morphisms() > MAX_CHECK_MORPHISMS {
        return Err(NerveError::ScaleExceeded {
            objects: c.num_objects(),
            morphisms: c.num_morphisms(),
        });
    }
    Ok(())
}

/// The simplicial map `N(F)` on the given truncated nerves.
pub fn nerve_of_functor(f: &Functor, source: &NerveResult, target: &NerveResult) -> SimplicialMap {
    let index: Vec<HashMap<&Chain, usize>> = target
        .chains
        .iter()
        .map(|l| l.iter().enumerate().map(|(k, c)| (c, k)).collect())
        .collect();
    source
        .chains
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|c| {
                    let image = Chain {
                        start: f.map_object(c.start),
                        arrows: c.arrows.iter().map(|&m| f.map_morphism(m)).collect(),
                    };
                    index[n][&image]
                })
                .collect()
        })
        .collect()
}

/// Compares `Fun(C, D)` with simplicial maps `N(C) -> N(D)` at truncation 2
/// through `F ↦ N(F)`.
pub fn nerve_fully_faithful_check(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Result<BijectionReport, NerveError> {
    check_scale(c)?;
    check_scale(d)?;
    let nc = nerve(c, 2);
    let nd = nerve(d, 2);
    let mut maps: HashMap<SimplicialMap, usize> = HashMap::new();
    enumerate_simplicial_maps::<()>(&nc.sset, &nd.sset, |m| {
        let k = maps.len();
        maps.insert(m.clone(), k);
        ControlFlow::Continue(())
    })
    .expect("equal truncations");
    let mapping = enumerate_functors(c, d)
        .iter()
        .map(|f| maps.get(&nerve_of_functor(f, &nc, &nd)).copied())
        .collect();
    Ok(BijectionReport::from_mapping(maps.len(), mapping))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{free_category, Quiver};
    use crate::library;
    use crate::simplex::{check_kan_condition, find_horn_fillers, HornInstance};

    fn chain3() -> Arc<FinCategory> {
        let q = Quiver::from_pairs(&["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
        Arc::new(free_category(&q).unwrap())
    }

    // functors [n] -> C, counted by summing over endpoints
    fn count_chains(c: &FinCategory, n: usize) -> usize {
        let mut ending = vec![1usize; c.num_objects()];
        for _ in 0..n {
            let mut next = vec![0; c.num_objects()];
            for m in c.morphism_ids() {
                next[c.tgt(m)] += ending[c.src(m)];
            }
            ending = next;
        }
        ending.iter().sum()
    }

    #[test]
    fn nerve_of_point() {
        let n = nerve(&Arc::new(library::discrete(1)), 3);
        assert_eq!(n.sset.counts(), &[1, 1, 1, 1]);
        assert_eq!(n.sset.nondegenerate_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn nerve_of_chain() {
        let n = nerve(&chain3(), 2);
        assert_eq!(n.sset.counts(), &[3, 6, 10]);
        assert_eq!(n.sset.nondegenerate_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn nerve_of_arrow_poset() {
        let n = nerve(&Arc::new(library::poset(1)), 1);
        let edges: Vec<String> = (0..3).map(|e| n.sset.label(1, e)).collect();
        assert_eq!(edges, vec!["id_0", "0≤1", "id_1"]);
    }

    #[test]
    fn face_on_chains() {
        let c = chain3();
        let fg = Chain { start: 0, arrows: vec![3, 4] };
        assert_eq!(apply_face_to_chain(&c, &fg, 1).unwrap(), Chain { start: 0, arrows: vec![5] });
        assert_eq!(apply_face_to_chain(&c, &fg, 0).unwrap(), Chain { start: 1, arrows: vec![4] });
        assert_eq!(apply_face_to_chain(&c, &fg, 2).unwrap(), Chain { start: 0, arrows: vec![3] });
        let f = Chain { start: 0, arrows: vec![3] };
        assert_eq!(apply_face_to_chain(&c, &f, 1).unwrap(), Chain::vertex(0));
        assert_eq!(apply_face_to_chain(&c, &f, 0).unwrap(), Chain::vertex(1));
        assert!(apply_face_to_chain(&c, &f, 2).is_err());
        assert!(apply_face_to_chain(&c, &Chain::vertex(0), 0).is_err());
    }

    #[test]
    fn degenerate_iff_contains_identity() {
        for e in library::categories() {
            let n = nerve(&e.category, 3);
            for (k, level) in n.chains.iter().enumerate() {
                for (x, chain) in level.iter().enumerate() {
                    let has_id = chain.arrows.iter().any(|&m| e.category.is_identity(m));
                    assert_eq!(n.sset.is_degenerate(k, x), has_id, "{}", e.name);
                }
            }
        }
    }

    #[test]
    fn level_counts_match_chain_count() {
        for e in library::categories() {
            let n = nerve(&e.category, 4);
            for k in 0..=4 {
                assert_eq!(n.sset.count(k), count_chains(&e.category, k), "{} level {k}", e.name);
            }
        }
    }

    #[test]
    fn inner_horn_composes() {
        let c = chain3();
        let n = nerve(&c, 2);
        let f = n.simplex_of(&Chain { start: 0, arrows: vec![3] }).unwrap();
        let g = n.simplex_of(&Chain { start: 1, arrows: vec![4] }).unwrap();
        let h = HornInstance::new(&n.sset, 2, 1, &[g, f]).unwrap();
        let fillers = find_horn_fillers(&n.sset, &h);
        assert_eq!(fillers.len(), 1);
        assert_eq!(n.chains[2][fillers[0]].arrows, vec![3, 4]);
    }

    #[test]
    fn outer_horn_in_collider_has_no_filler() {
        let q = Quiver::from_pairs(&["A", "B", "C"], &[(0, 2), (1, 2)]).unwrap();
        let c = Arc::new(free_category(&q).unwrap());
        let n = nerve(&c, 2);
        let ac = n.simplex_of(&Chain { start: 0, arrows: vec![3] }).unwrap();
        let bc = n.simplex_of(&Chain { start: 1, arrows: vec![4] }).unwrap();
        // Λ^2_2 with d_0 = B -> C and d_1 = A -> C asks for an edge A -> B
        let h = HornInstance::new(&n.sset, 2, 2, &[bc, ac]).unwrap();
        assert!(find_horn_fillers(&n.sset, &h).is_empty());
    }

    #[test]
    fn inner_horns_fill_uniquely_on_library() {
        for e in library::categories() {
            let r = check_kan_condition(&nerve(&e.category, 3).sset, 3, true);
            assert!(r.all_uniquely_filled(), "{}", e.name);
        }
    }

    #[test]
    fn full_faithfulness_examples() {
        let one = Arc::new(library::discrete(1));
        let r = nerve_fully_faithful_check(&one, &one).unwrap();
        assert!(r.holds && r.left_count == 1);
        let r = nerve_fully_faithful_check(&Arc::new(library::poset(1)), &Arc::new(library::poset(2))).unwrap();
        assert!(r.holds && r.left_count == 6);
        let q = Quiver::from_pairs(&["a", "b"], &[(0, 1)]).unwrap();
        let r = nerve_fully_faithful_check(&Arc::new(free_category(&q).unwrap()), &Arc::new(library::discrete(2))).unwrap();
        assert!(r.holds && r.left_count == 2);
    }

    #[test]
    fn full_faithfulness_rejects_large_categories() {
        let big = Arc::new(library::discrete(5));
        assert!(matches!(
            nerve_fully_faithful_check(&big, &big),
            Err(NerveError::ScaleExceeded { .. })
        ));
    }
}
