//! The simplex category Δ and truncated simplicial sets.
//!
//! Monotone maps `[m] -> [n]` are stored as value lists. A truncated
//! simplicial set keeps levels `0..=N` with interned simplex ids and dense
//! face/degeneracy tables.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("rank mismatch: codomain [{codomain}] vs domain [{domain}]")]
    RankMismatch { codomain: usize, domain: usize },
    #[error("values do not define a monotone map [{m}] -> [{n}]")]
    NotMonotone { m: usize, n: usize },
    #[error("level {level}: {what}")]
    Malformed { level: usize, what: String },
    #[error("simplicial identity {identity} fails at level {level} (i={i}, j={j}, simplex {simplex})")]
    SimplicialIdentity {
        identity: &'static str,
        level: usize,
        i: usize,
        j: usize,
        simplex: usize,
    },
    #[error("simplex {simplex} at level {level} has a face outside the subset")]
    NotClosed { level: usize, simplex: usize },
    #[error("horn faces {a} and {b} are incompatible")]
    IncompatibleFaces { a: usize, b: usize },
    #[error("dimension {dimension} exceeds truncation {truncation}")]
    AboveTruncation { dimension: usize, truncation: usize },
}

/// A non-decreasing map `[m] -> [n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawMonotone", into = "RawMonotone")]
pub struct MonotoneMap {
    m: usize,
    n: usize,
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawMonotone {
    m: usize,
    n: usize,
    values: Vec<usize>,
}

impl TryFrom<RawMonotone> for MonotoneMap {
    type Error = SimplexError;
    fn try_from(r: RawMonotone) -> Result<Self, SimplexError> {
        MonotoneMap::new(r.m, r.n, r.values)
    }
}

impl From<MonotoneMap> for RawMonotone {
    fn from(f: MonotoneMap) -> Self {
        RawMonotone {
            m: f.m,
            n: f.n,
            values: f.values,
        }
    }
}

impl MonotoneMap {
    pub fn new(m: usize, n: usize, values: Vec<usize>) -> Result<Self, SimplexError> {
        let ok = values.len() == m + 1
            && values.iter().all(|&v| v <= n)
            && values.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(SimplexError::NotMonotone { m, n });
        }
        Ok(MonotoneMap { m, n, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap {
            m: n,
            n,
            values: (0..=n).collect(),
        }
    }

    pub fn domain(&self) -> usize {
        self.m
    }

    pub fn codomain(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, k: usize) -> usize {
        self.values[k]
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && self.values[self.m] == self.n
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// Every monotone map `[m] -> [n]`, in lexicographic order of values.
    pub fn all(m: usize, n: usize) -> Vec<MonotoneMap> {
        let mut out = Vec::new();
        let mut values = vec![0; m + 1];
        fn rec(k: usize, lo: usize, m: usize, n: usize, values: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
            if k > m {
                out.push(MonotoneMap {
                    m,
                    n,
                    values: values.clone(),
                });
                return;
            }
            for v in lo..=n {
                values[k] = v;
                rec(k + 1, v, m, n, values, out);
            }
        }
        rec(0, 0, m, n, &mut values, &mut out);
        out
    }
}

/// `δ_i: [n] -> [n+1]`, the injection skipping `i`.
pub fn coface(n: usize, i: usize) -> Result<MonotoneMap, SimplexError> {
    if i > n + 1 {
        return Err(SimplexError::IndexOutOfRange { index: i, bound: n + 1 });
    }
    let values = (0..=n).map(|k| if k < i { k } else { k + 1 }).collect();
    Ok(MonotoneMap { m: n, n: n + 1, values })
}

/// `σ_j: [n] -> [n-1]`, the surjection hitting `j` twice.
pub fn codegeneracy(n: usize, j: usize) -> Result<MonotoneMap, SimplexError> {
    if n == 0 || j > n - 1 {
        return Err(SimplexError::IndexOutOfRange {
            index: j,
            bound: n.saturating_sub(1),
        });
    }
    let values = (0..=n).map(|k| if k <= j { k } else { k - 1 }).collect();
    Ok(MonotoneMap { m: n, n: n - 1, values })
}

/// `g ∘ f`.
pub fn compose_monotone(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap, SimplexError> {
    if f.n != g.m {
        return Err(SimplexError::RankMismatch {
            codomain: f.n,
            domain: g.m,
        });
    }
    Ok(MonotoneMap {
        m: f.m,
        n: g.n,
        values: f.values.iter().map(|&v| g.values[v]).collect(),
    })
}

/// Canonical form `f = δ_{i_1} ∘ … ∘ δ_{i_p} ∘ σ_{j_1} ∘ … ∘ σ_{j_q}` with
/// `i_1 > … > i_p` and `j_1 < … < j_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiMono {
    pub sigma: Vec<usize>,
    pub delta: Vec<usize>,
}

pub fn epi_mono_factorize(f: &MonotoneMap) -> EpiMono {
    let sigma = (0..f.m).filter(|&j| f.values[j] == f.values[j + 1]).collect();
    let mut delta: Vec<usize> = (0..=f.n).filter(|v| !f.values.contains(v)).collect();
    delta.reverse();
    EpiMono { sigma, delta }
}

impl EpiMono {
    /// Rebuilds the map on `[m]` by composing the generators.
    pub fn recompose(&self, m: usize) -> Result<MonotoneMap, SimplexError> {
        let mut acc = MonotoneMap::identity(m);
        for &j in self.sigma.iter().rev() {
            acc = compose_monotone(&codegeneracy(acc.n, j)?, &acc)?;
        }
        for &i in self.delta.iter().rev() {
            acc = compose_monotone(&coface(acc.n, i)?, &acc)?;
        }
        Ok(acc)
    }
}

/// A simplicial set truncated at level `N`.
///
/// `faces[n][i][x] = d_i x` for `x ∈ X_n`, `n ≥ 1`; `degeneracies[n][j][x] =
/// s_j x` for `x ∈ X_n`, `n < N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSSet {
    truncation: usize,
    counts: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    degeneracies: Vec<Vec<Vec<usize>>>,
    degenerate: Vec<Vec<bool>>,
    labels: Option<Vec<Vec<String>>>,
}

impl TruncatedSSet {
    pub fn new(
        truncation: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplexError> {
        let bad = |level: usize, what: &str| SimplexError::Malformed {
            level,
            what: what.to_string(),
        };
        if counts.len() != truncation + 1 || faces.len() != truncation + 1 || degeneracies.len() != truncation + 1 {
            return Err(bad(0, "expected one entry per level"));
        }
        for n in 0..=truncation {
            let nf = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != nf {
                return Err(bad(n, "wrong number of face maps"));
            }
            for d in &faces[n] {
                if d.len() != counts[n] || d.iter().any(|&y| y >= counts[n - 1]) {
                    return Err(bad(n, "face table has wrong length or out-of-range entry"));
                }
            }
            let nd = if n == truncation { 0 } else { n + 1 };
            if degeneracies[n].len() != nd {
                return Err(bad(n, "wrong number of degeneracy maps"));
            }
            for s in &degeneracies[n] {
                if s.len() != counts[n] || s.iter().any(|&y| y >= counts[n + 1]) {
                    return Err(bad(n, "degeneracy table has wrong length or out-of-range entry"));
                }
            }
        }
        let mut degenerate: Vec<Vec<bool>> = counts.iter().map(|&c| vec![false; c]).collect();
        for n in 0..truncation {
            for s in &degeneracies[n] {
                for &y in s {
                    degenerate[n + 1][y] = true;
                }
            }
        }
        let x = TruncatedSSet {
            truncation,
            counts,
            faces,
            degeneracies,
            degenerate,
            labels: None,
        };
        x.audit()?;
        Ok(x)
    }

    /// Checks every simplicial identity whose two sides are defined.
    pub fn audit(&self) -> Result<(), SimplexError> {
        let fail = |identity, level, i, j, simplex| {
            Err(SimplexError::SimplicialIdentity {
                identity,
                level,
                i,
                j,
                simplex,
            })
        };
        for n in 2..=self.truncation {
            for x in 0..self.counts[n] {
                for j in 0..=n {
                    for i in 0..j {
                        if self.face(n - 1, i, self.face(n, j, x)) != self.face(n - 1, j - 1, self.face(n, i, x)) {
                            return fail("d_i d_j = d_{j-1} d_i", n, i, j, x);
                        }
                    }
                }
            }
        }
        for n in 0..self.truncation {
            for x in 0..self.counts[n] {
                for j in 0..=n {
                    let sx = self.degeneracy(n, j, x);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, i, sx);
                        let rhs = if i == j || i == j + 1 {
                            Some(x)
                        } else if n == 0 {
                            None
                        } else if i < j {
                            Some(self.degeneracy(n - 1, j - 1, self.face(n, i, x)))
                        } else {
                            Some(self.degeneracy(n - 1, j, self.face(n, i - 1, x)))
                        };
                        if rhs.is_some_and(|r| r != lhs) {
                            return fail("d_i s_j", n, i, j, x);
                        }
                    }
                    if n + 2 <= self.truncation {
                        for i in 0..=j {
                            let lhs = self.degeneracy(n + 1, i, sx);
                            let rhs = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x));
                            if lhs != rhs {
                                return fail("s_i s_j = s_{j+1} s_i", n, i, j, x);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a simplicial set from explicit simplices and their face and
    /// degeneracy operations, interning simplices per level.
    pub fn from_simplices<T, F, S>(
        truncation: usize,
        levels: Vec<Vec<T>>,
        face: F,
        degeneracy: S,
    ) -> Result<Self, SimplexError>
    where
        T: Hash + Eq + Clone,
        F: Fn(usize, &T, usize) -> T,
        S: Fn(usize, &T, usize) -> T,
    {
        let index: Vec<HashMap<&T, usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(k, t)| (t, k)).collect())
            .collect();
        let lookup = |level: usize, t: &T| {
            index[level].get(t).copied().ok_or_else(|| SimplexError::Malformed {
                level,
                what: "operation leaves the given simplices".into(),
            })
        };
        let mut faces = vec![Vec::new()];
        let mut degeneracies = Vec::new();
        for n in 0..=truncation {
            if n > 0 {
                let table = (0..=n)
                    .map(|i| levels[n].iter().map(|t| lookup(n - 1, &face(n, t, i))).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()?;
                faces.push(table);
            }
            let table = if n < truncation {
                (0..=n)
                    .map(|j| levels[n].iter().map(|t| lookup(n + 1, &degeneracy(n, t, j))).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()?
            } else {
                Vec::new()
            };
            degeneracies.push(table);
        }
        TruncatedSSet::new(truncation, levels.iter().map(Vec::len).collect(), faces, degeneracies)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        debug_assert!(labels.iter().map(Vec::len).eq(self.counts.iter().copied()));
        self.labels = Some(labels);
        self
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degeneracy(&self, n: usize, j: usize, x: usize) -> usize {
        self.degeneracies[n][j][x]
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        self.degenerate[n][x]
    }

    pub fn nondegenerate(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.counts[n]).filter(move |&x| !self.degenerate[n][x])
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.truncation).map(|n| self.nondegenerate(n).count()).collect()
    }

    pub fn label(&self, n: usize, x: usize) -> String {
        match &self.labels {
            Some(l) => l[n][x].clone(),
            None => x.to_string(),
        }
    }

    /// The faces `(d_0 x, …, d_n x)` of an n-simplex.
    pub fn faces_of(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n).map(|i| self.face(n, i, x)).collect()
    }

    /// Sub-simplicial set on the simplices accepted by `keep`, which must be
    /// closed under faces and degeneracies. Also returns the old ids per level.
    pub fn restrict(
        &self,
        keep: impl Fn(usize, usize) -> bool,
    ) -> Result<(TruncatedSSet, Vec<Vec<usize>>), SimplexError> {
        let old: Vec<Vec<usize>> = (0..=self.truncation)
            .map(|n| (0..self.counts[n]).filter(|&x| keep(n, x)).collect())
            .collect();
        let mut new_id: Vec<Vec<Option<usize>>> = self.counts.iter().map(|&c| vec![None; c]).collect();
        for (n, ids) in old.iter().enumerate() {
            for (k, &x) in ids.iter().enumerate() {
                new_id[n][x] = Some(k);
            }
        }
        let map = |level: usize, y: usize, from: usize, x: usize| {
            new_id[level][y].ok_or(SimplexError::NotClosed {
                level: from,
                simplex: x,
            })
        };
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for n in 0..=self.truncation {
            let f = self.faces[n]
                .iter()
                .map(|d| old[n].iter().map(|&x| map(n - 1, d[x], n, x)).collect())
                .collect::<Result<Vec<Vec<usize>>, _>>()?;
            let s = self.degeneracies[n]
                .iter()
                .map(|s| old[n].iter().map(|&x| map(n + 1, s[x], n, x)).collect())
                .collect::<Result<Vec<Vec<usize>>, _>>()?;
            faces.push(f);
            degeneracies.push(s);
        }
        let mut sub = TruncatedSSet::new(
            self.truncation,
            old.iter().map(Vec::len).collect(),
            faces,
            degeneracies,
        )?;
        if let Some(labels) = &self.labels {
            sub.labels = Some(
                old.iter()
                    .enumerate()
                    .map(|(n, ids)| ids.iter().map(|&x| labels[n][x].clone()).collect())
                    .collect(),
            );
        }
        Ok((sub, old))
    }

    pub fn to_raw(&self) -> RawSSet {
        RawSSet {
            truncation: self.truncation,
            levels: (0..=self.truncation)
                .map(|n| RawLevel {
                    simplices: (0..self.counts[n]).collect(),
                    faces: self.faces[n].clone(),
                    degeneracies: self.degeneracies[n].clone(),
                    labels: self.labels.as_ref().map(|l| l[n].clone()),
                })
                .collect(),
        }
    }
}

/// JSON form of a truncated simplicial set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSSet {
    pub truncation: usize,
    pub levels: Vec<RawLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLevel {
    pub simplices: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    pub degeneracies: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl TryFrom<RawSSet> for TruncatedSSet {
    type Error = SimplexError;

    fn try_from(raw: RawSSet) -> Result<Self, SimplexError> {
        if raw.levels.len() != raw.truncation + 1 {
            return Err(SimplexError::Malformed {
                level: raw.levels.len(),
                what: "expected truncation + 1 levels".into(),
            });
        }
        for (n, l) in raw.levels.iter().enumerate() {
            if !l.simplices.iter().copied().eq(0..l.simplices.len()) {
                return Err(SimplexError::Malformed {
                    level: n,
                    what: "simplex ids must be 0..k in order".into(),
                });
            }
        }
        let counts = raw.levels.iter().map(|l| l.simplices.len()).collect();
        let labels: Option<Vec<Vec<String>>> = raw.levels.iter().map(|l| l.labels.clone()).collect();
        let (faces, degeneracies) = raw.levels.into_iter().map(|l| (l.faces, l.degeneracies)).unzip();
        let mut x = TruncatedSSet::new(raw.truncation, counts, faces, degeneracies)?;
        if let Some(labels) = labels {
            if labels.iter().map(Vec::len).eq(x.counts.iter().copied()) {
                x.labels = Some(labels);
            }
        }
        Ok(x)
    }
}

/// `Δ^n` truncated at `N`: the m-simplices are the monotone maps `[m] -> [n]`.
pub fn standard_simplex(n: usize, truncation: usize) -> TruncatedSSet {
    let levels: Vec<Vec<Vec<usize>>> = (0..=truncation)
        .map(|m| MonotoneMap::all(m, n).into_iter().map(|f| f.values).collect())
        .collect();
    let labels = levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|v| v.iter().map(usize::to_string).collect::<Vec<_>>().join(""))
                .collect()
        })
        .collect();
    TruncatedSSet::from_simplices(
        truncation,
        levels,
        |_, v, i| {
            let mut w = v.clone();
            w.remove(i);
            w
        },
        |_, v, j| {
            let mut w = v.clone();
            w.insert(j, v[j]);
            w
        },
    )
    .expect("standard simplex satisfies the simplicial identities")
    .with_labels(labels)
}

fn sub_of_standard(
    n: usize,
    truncation: usize,
    member: impl Fn(&MonotoneMap) -> bool,
) -> TruncatedSSet {
    let maps: Vec<Vec<MonotoneMap>> = (0..=truncation).map(|m| MonotoneMap::all(m, n)).collect();
    standard_simplex(n, truncation)
        .restrict(|m, x| member(&maps[m][x]))
        .expect("subset is closed under faces and degeneracies")
        .0
}

/// `∂Δ^n`: the non-surjective maps.
pub fn boundary(n: usize, truncation: usize) -> Result<TruncatedSSet, SimplexError> {
    if n == 0 {
        return Err(SimplexError::IndexOutOfRange { index: 0, bound: 1 });
    }
    Ok(sub_of_standard(n, truncation, |a| !a.is_surjective()))
}

/// `Λ^n_i`: maps α with `[n] ⊄ α([m]) ∪ {i}`.
pub fn horn(n: usize, i: usize, truncation: usize) -> Result<TruncatedSSet, SimplexError> {
    if n == 0 {
        return Err(SimplexError::IndexOutOfRange { index: 0, bound: 1 });
    }
    if i > n {
        return Err(SimplexError::IndexOutOfRange { index: i, bound: n });
    }
    Ok(sub_of_standard(n, truncation, |a| {
        (0..=n).any(|k| k != i && !a.values().contains(&k))
    }))
}

/// A horn `Λ^n_i -> X`, given by its faces `d_k` for `k ≠ i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornInstance {
    pub dimension: usize,
    pub missing: usize,
    /// Indexed by face position; `None` exactly at `missing`.
    pub faces: Vec<Option<usize>>,
}

impl HornInstance {
    /// `faces` lists the (n-1)-simplices for `k = 0..=n`, skipping `missing`.
    pub fn new(
        ambient: &TruncatedSSet,
        dimension: usize,
        missing: usize,
        faces: &[usize],
    ) -> Result<Self, SimplexError> {
        let n = dimension;
        if n == 0 {
            return Err(SimplexError::IndexOutOfRange { index: 0, bound: 1 });
        }
        if n > ambient.truncation {
            return Err(SimplexError::AboveTruncation {
                dimension: n,
                truncation: ambient.truncation,
            });
        }
        if missing > n {
            return Err(SimplexError::IndexOutOfRange { index: missing, bound: n });
        }
        if faces.len() != n {
            return Err(SimplexError::Malformed {
                level: n - 1,
                what: format!("a horn of dimension {n} needs {n} faces"),
            });
        }
        let mut slots = Vec::with_capacity(n + 1);
        let mut it = faces.iter();
        for k in 0..=n {
            slots.push(if k == missing { None } else { it.next().copied() });
        }
        for &y in faces {
            if y >= ambient.count(n - 1) {
                return Err(SimplexError::IndexOutOfRange {
                    index: y,
                    bound: ambient.count(n - 1),
                });
            }
        }
        for b in 0..=n {
            for a in 0..b {
                if let (Some(fa), Some(fb)) = (slots[a], slots[b]) {
                    if !compatible(ambient, n, a, fa, b, fb) {
                        return Err(SimplexError::IncompatibleFaces { a, b });
                    }
                }
            }
        }
        Ok(HornInstance {
            dimension: n,
            missing,
            faces: slots,
        })
    }
}

fn compatible(x: &TruncatedSSet, n: usize, a: usize, fa: usize, b: usize, fb: usize) -> bool {
    n < 2 || x.face(n - 1, a, fb) == x.face(n - 1, b - 1, fa)
}

/// Every n-simplex whose faces agree with the horn away from the missing index.
pub fn find_horn_fillers(x: &TruncatedSSet, h: &HornInstance) -> Vec<usize> {
    let n = h.dimension;
    (0..x.count(n))
        .filter(|&s| {
            h.faces
                .iter()
                .enumerate()
                .all(|(k, f)| f.map_or(true, |f| x.face(n, k, s) == f))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornCount {
    pub dimension: usize,
    pub missing: usize,
    pub horns: usize,
    pub filled: usize,
    pub uniquely_filled: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KanReport {
    pub up_to: usize,
    pub inner_only: bool,
    pub total_horns: usize,
    pub filled: usize,
    pub uniquely_filled: usize,
    pub per_horn: Vec<HornCount>,
    pub unfilled: Vec<HornInstance>,
    pub unchecked_dimensions: Vec<usize>,
}

impl KanReport {
    pub fn all_filled(&self) -> bool {
        self.unfilled.is_empty()
    }

    pub fn all_uniquely_filled(&self) -> bool {
        self.uniquely_filled == self.total_horns
    }
}

/// Every compatible face tuple for `Λ^n_i`, in lexicographic order.
pub fn enumerate_horns(
    x: &TruncatedSSet,
    n: usize,
    missing: usize,
    mut visit: impl FnMut(&[Option<usize>]),
) {
    let positions: Vec<usize> = (0..=n).filter(|&k| k != missing).collect();
    let mut slots: Vec<Option<usize>> = vec![None; n + 1];
    fn rec(
        x: &TruncatedSSet,
        n: usize,
        positions: &[usize],
        depth: usize,
        slots: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if depth == positions.len() {
            visit(slots);
            return;
        }
        let b = positions[depth];
        for fb in 0..x.count(n - 1) {
            let ok = positions[..depth]
                .iter()
                .all(|&a| compatible(x, n, a, slots[a].unwrap(), b, fb));
            if ok {
                slots[b] = Some(fb);
                rec(x, n, positions, depth + 1, slots, visit);
            }
        }
        slots[b] = None;
    }
    rec(x, n, &positions, 0, &mut slots, &mut visit);
}

/// Enumerates every horn up to dimension `up_to` and counts its fillers.
pub fn check_kan_condition(x: &TruncatedSSet, up_to: usize, inner_only: bool) -> KanReport {
    let mut report = KanReport {
        up_to,
        inner_only,
        total_horns: 0,
        filled: 0,
        uniquely_filled: 0,
        per_horn: Vec::new(),
        unfilled: Vec::new(),
        unchecked_dimensions: (x.truncation + 1..=up_to).collect(),
    };
    for n in 1..=up_to.min(x.truncation) {
        let missing: Vec<usize> = if inner_only {
            (1..n).collect()
        } else {
            (0..=n).collect()
        };
        for i in missing {
            let mut fillers: HashMap<Vec<usize>, usize> = HashMap::new();
            for s in 0..x.count(n) {
                let key = (0..=n).filter(|&k| k != i).map(|k| x.face(n, k, s)).collect();
                *fillers.entry(key).or_default() += 1;
            }
            let mut count = HornCount {
                dimension: n,
                missing: i,
                horns: 0,
                filled: 0,
                uniquely_filled: 0,
            };
            enumerate_horns(x, n, i, |slots| {
                let key: Vec<usize> = slots.iter().flatten().copied().collect();
                let c = fillers.get(&key).copied().unwrap_or(0);
                count.horns += 1;
                if c > 0 {
                    count.filled += 1;
                }
                if c == 1 {
                    count.uniquely_filled += 1;
                }
                if c == 0 {
                    report.unfilled.push(HornInstance {
                        dimension: n,
                        missing: i,
                        faces: slots.to_vec(),
                    });
                }
            });
            report.total_horns += count.horns;
            report.filled += count.filled;
            report.uniquely_filled += count.uniquely_filled;
            report.per_horn.push(count);
        }
    }
    report
}

/// A simplicial map, given per level as the image of each simplex id.
pub type SimplicialMap = Vec<Vec<usize>>;

pub fn is_simplicial_map(x: &TruncatedSSet, y: &TruncatedSSet, f: &SimplicialMap) -> bool {
    let top = x.truncation;
    if y.truncation < top || f.len() != top + 1 {
        return false;
    }
    for n in 0..=top {
        if f[n].len() != x.count(n) || f[n].iter().any(|&v| v >= y.count(n)) {
            return false;
        }
        for s in 0..x.count(n) {
            if n > 0 && (0..=n).any(|i| f[n - 1][x.face(n, i, s)] != y.face(n, i, f[n][s])) {
                return false;
            }
            if n < top && (0..=n).any(|j| f[n + 1][x.degeneracy(n, j, s)] != y.degeneracy(n, j, f[n][s])) {
                return false;
            }
        }
    }
    true
}

/// Enumerates simplicial maps `X -> Y` on levels `0..=X.truncation`.
/// Degenerate simplices are forced by their degeneracy representations;
/// nondegenerate ones range over simplices with matching faces.
pub fn enumerate_simplicial_maps<B>(
    x: &TruncatedSSet,
    y: &TruncatedSSet,
    mut visit: impl FnMut(&SimplicialMap) -> ControlFlow<B>,
) -> Result<Option<B>, SimplexError> {
    let top = x.truncation;
    if y.truncation < top {
        return Err(SimplexError::AboveTruncation {
            dimension: top,
            truncation: y.truncation,
        });
    }
    // degeneracy representations (j, z) with x = s_j z
    let mut reps: Vec<Vec<Vec<(usize, usize)>>> = x.counts.iter().map(|&c| vec![Vec::new(); c]).collect();
    for n in 0..top {
        for j in 0..=n {
            for z in 0..x.count(n) {
                reps[n + 1][x.degeneracy(n, j, z)].push((j, z));
            }
        }
    }
    let order: Vec<(usize, usize)> = (0..=top)
        .flat_map(|n| (0..x.count(n)).map(move |s| (n, s)))
        .collect();
    let mut f: SimplicialMap = x.counts.iter().map(|&c| vec![usize::MAX; c]).collect();

    struct Ctx<'a> {
        x: &'a TruncatedSSet,
        y: &'a TruncatedSSet,
        reps: &'a [Vec<Vec<(usize, usize)>>],
        order: &'a [(usize, usize)],
    }

    fn fits(c: &Ctx, f: &SimplicialMap, n: usize, s: usize, v: usize) -> bool {
        (n == 0 || (0..=n).all(|i| f[n - 1][c.x.face(n, i, s)] == c.y.face(n, i, v)))
            && c.reps[n][s].iter().all(|&(j, z)| c.y.degeneracy(n - 1, j, f[n - 1][z]) == v)
    }

    fn rec<B>(
        c: &Ctx,
        depth: usize,
        f: &mut SimplicialMap,
        visit: &mut dyn FnMut(&SimplicialMap) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let Some(&(n, s)) = c.order.get(depth) else {
            return visit(f);
        };
        if let Some(&(j, z)) = c.reps[n][s].first() {
            let v = c.y.degeneracy(n - 1, j, f[n - 1][z]);
            if fits(c, f, n, s, v) {
                f[n][s] = v;
                rec(c, depth + 1, f, visit)?;
            }
            return ControlFlow::Continue(());
        }
        for v in 0..c.y.count(n) {
            if fits(c, f, n, s, v) {
                f[n][s] = v;
                rec(c, depth + 1, f, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    let ctx = Ctx {
        x,
        y,
        reps: &reps,
        order: &order,
    };
    Ok(match rec(&ctx, 0, &mut f, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    })
}

pub fn count_simplicial_maps(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<usize, SimplexError> {
    let mut k = 0;
    enumerate_simplicial_maps::<()>(x, y, |_| {
        k += 1;
        ControlFlow::Continue(())
    })?;
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn coface_examples() {
        assert_eq!(coface(0, 0).unwrap().values(), &[1]);
        assert_eq!(coface(1, 1).unwrap().values(), &[0, 2]);
        assert_eq!(coface(1, 2).unwrap().values(), &[0, 1]);
        assert_eq!(coface(1, 3), Err(SimplexError::IndexOutOfRange { index: 3, bound: 2 }));
    }

    #[test]
    fn codegeneracy_examples() {
        assert_eq!(codegeneracy(1, 0).unwrap().values(), &[0, 0]);
        assert_eq!(codegeneracy(2, 0).unwrap().values(), &[0, 0, 1]);
        assert_eq!(codegeneracy(2, 1).unwrap().values(), &[0, 1, 1]);
        assert!(codegeneracy(0, 0).is_err());
        assert!(codegeneracy(2, 2).is_err());
    }

    #[test]
    fn compose_examples() {
        let d0 = coface(0, 0).unwrap();
        let d1 = coface(1, 1).unwrap();
        let d0_1 = coface(1, 0).unwrap();
        assert_eq!(compose_monotone(&d1, &d0).unwrap().values(), &[2]);
        assert_eq!(compose_monotone(&d1, &d0).unwrap(), compose_monotone(&d0_1, &d0).unwrap());
        let s0 = codegeneracy(1, 0).unwrap();
        assert_eq!(compose_monotone(&s0, &d0).unwrap(), MonotoneMap::identity(0));
        let f = MonotoneMap::new(2, 3, vec![0, 2, 2]).unwrap();
        assert_eq!(compose_monotone(&MonotoneMap::identity(3), &f).unwrap(), f);
        assert_eq!(
            compose_monotone(&d0, &d0),
            Err(SimplexError::RankMismatch { codomain: 1, domain: 0 })
        );
    }

    #[test]
    fn factorization_examples() {
        let f = MonotoneMap::new(2, 1, vec![0, 0, 1]).unwrap();
        assert_eq!(epi_mono_factorize(&f), EpiMono { sigma: vec![0], delta: vec![] });
        assert_eq!(
            epi_mono_factorize(&MonotoneMap::identity(3)),
            EpiMono { sigma: vec![], delta: vec![] }
        );
        let g = MonotoneMap::new(1, 2, vec![0, 2]).unwrap();
        assert_eq!(epi_mono_factorize(&g), EpiMono { sigma: vec![], delta: vec![1] });
    }

    #[test]
    fn monotone_map_json() {
        let f = MonotoneMap::new(1, 2, vec![0, 2]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"m":1,"n":2,"values":[0,2]}"#);
        assert_eq!(serde_json::from_str::<MonotoneMap>(&s).unwrap(), f);
        assert!(serde_json::from_str::<MonotoneMap>(r#"{"m":1,"n":2,"values":[2,0]}"#).is_err());
    }

    #[test]
    fn standard_simplex_examples() {
        let x = standard_simplex(0, 2);
        assert_eq!(x.counts(), &[1, 1, 1]);
        assert_eq!(x.nondegenerate_counts(), vec![1, 0, 0]);
        let x = standard_simplex(1, 1);
        assert_eq!(x.counts(), &[2, 3]);
        assert_eq!(x.nondegenerate_counts(), vec![2, 1]);
        assert_eq!(standard_simplex(2, 2).nondegenerate_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn standard_simplex_binomial_counts() {
        for n in 0..=4 {
            let x = standard_simplex(n, 4);
            for m in 0..=4 {
                assert_eq!(x.nondegenerate_counts()[m], binomial(n + 1, m + 1));
                assert_eq!(x.count(m), binomial(n + m + 1, m + 1));
            }
        }
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary(1, 1).unwrap().nondegenerate_counts(), vec![2, 0]);
        assert_eq!(boundary(2, 2).unwrap().nondegenerate_counts(), vec![3, 3, 0]);
        assert_eq!(boundary(3, 3).unwrap().nondegenerate_counts(), vec![4, 6, 4, 0]);
    }

    #[test]
    fn horn_examples() {
        let h = horn(2, 1, 2).unwrap();
        assert_eq!(h.nondegenerate_counts(), vec![3, 2, 0]);
        let edges: Vec<String> = h.nondegenerate(1).map(|e| h.label(1, e)).collect();
        assert_eq!(edges, vec!["01", "12"]);
        let h = horn(2, 0, 2).unwrap();
        let edges: Vec<String> = h.nondegenerate(1).map(|e| h.label(1, e)).collect();
        assert_eq!(edges, vec!["01", "02"]);
        let h = horn(1, 0, 1).unwrap();
        let vertices: Vec<String> = h.nondegenerate(0).map(|v| h.label(0, v)).collect();
        assert_eq!(vertices, vec!["0"]);
        assert!(horn(2, 3, 2).is_err());
    }

    #[test]
    fn sset_json_round_trip() {
        let x = horn(2, 1, 3).unwrap();
        let json = serde_json::to_string(&x.to_raw()).unwrap();
        let back = TruncatedSSet::try_from(serde_json::from_str::<RawSSet>(&json).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn audit_rejects_broken_faces() {
        let mut raw = standard_simplex(1, 1).to_raw();
        // the degenerate edge "00" = s_0("0") gets d_0 = "1"
        raw.levels[1].faces[0][0] = 1;
        let err = TruncatedSSet::try_from(raw).unwrap_err();
        assert!(matches!(err, SimplexError::SimplicialIdentity { .. }), "{err:?}");
    }

    #[test]
    fn degenerate_horn_is_filled() {
        let x = standard_simplex(0, 2);
        let h = HornInstance::new(&x, 2, 1, &[0, 0]).unwrap();
        assert_eq!(find_horn_fillers(&x, &h), vec![0]);
    }

    #[test]
    fn incompatible_horn_is_rejected() {
        let x = standard_simplex(1, 2);
        // edges of Δ^1 in order: "00", "01", "11"
        let err = HornInstance::new(&x, 2, 1, &[0, 2]).unwrap_err();
        assert_eq!(err, SimplexError::IncompatibleFaces { a: 0, b: 2 });
    }

    #[test]
    fn kan_check_of_point_is_trivial() {
        let r = check_kan_condition(&standard_simplex(0, 3), 3, false);
        assert!(r.all_filled() && r.all_uniquely_filled());
        let r = check_kan_condition(&standard_simplex(0, 2), 4, false);
        assert_eq!(r.unchecked_dimensions, vec![3, 4]);
    }

    #[test]
    fn standard_simplex_outer_horns_fail() {
        // 1-dimensional horns are filled by degenerate edges; Δ^1 fails only
        // at the outer 2-horns, e.g. d_2 = "01", d_1 = "00" in Λ^2_0
        let r = check_kan_condition(&standard_simplex(1, 2), 2, false);
        assert!(r.per_horn.iter().filter(|c| c.dimension == 1).all(|c| c.filled == c.horns));
        assert!(r.unfilled.iter().all(|h| h.missing != 1));
        assert!(r.unfilled.contains(&HornInstance { dimension: 2, missing: 0, faces: vec![None, Some(0), Some(1)] }));
        let inner = check_kan_condition(&standard_simplex(1, 2), 2, true);
        assert!(inner.all_uniquely_filled());
    }

    #[test]
    fn simplicial_maps_between_standard_simplices_are_monotone_maps() {
        for m in 0..=2 {
            for n in 0..=2 {
                let k = count_simplicial_maps(&standard_simplex(m, 2), &standard_simplex(n, 2)).unwrap();
                assert_eq!(k, MonotoneMap::all(m, n).len(), "Δ^{m} -> Δ^{n}");
            }
        }
    }

    #[test]
    fn enumerated_maps_are_simplicial() {
        let x = horn(2, 1, 2).unwrap();
        let y = standard_simplex(1, 2);
        let mut seen = 0;
        enumerate_simplicial_maps::<()>(&x, &y, |f| {
            assert!(is_simplicial_map(&x, &y, f));
            seen += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        // a map Λ^2_1 -> Δ^1 is a pair of composable monotone edges
        assert_eq!(seen, 4);
    }
}
