//! Normalized chain complexes, Smith normal form over ℤ and homology
//! profiles of classifying spaces.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::elements::{category_of_elements, Instance};
use crate::fincat::FinCategory;
use crate::nerve::nerve;
use crate::simplex::TruncatedSSet;

pub const DEFAULT_TRUNCATION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("∂_{} ∘ ∂_{degree} is nonzero on column {column}", degree - 1)]
    BoundarySquareNonzero { degree: usize, column: usize },
    #[error("profiles computed at truncations {before} and {after}")]
    TruncationMismatch { before: usize, after: usize },
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    fn add(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] += v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// `self · rhs` in 128-bit arithmetic; `None` on a dimension mismatch or
    /// an entry outside `i64`.
    pub fn mul(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s: i128 = (0..self.cols)
                    .map(|k| self.get(i, k) as i128 * rhs.get(k, j) as i128)
                    .sum();
                out.set(i, j, i64::try_from(s).ok()?);
            }
        }
        Some(out)
    }

    /// Nonzero entries as `row col value` lines.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    writeln!(out, "{r} {c} {v}").unwrap();
                }
            }
        }
        out
    }
}

/// Normalized chain complex `C_N -> ... -> C_0` on nondegenerate simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dimension: usize,
    /// Simplex ids of the basis at each level.
    bases: Vec<Vec<usize>>,
    /// `boundaries[n - 1]` is `∂_n: C_n -> C_{n-1}`, rows indexed by the
    /// `(n-1)`-basis.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Builds a complex from explicit boundaries and checks `∂∂ = 0`.
    pub fn from_boundaries(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, HomologyError> {
        assert_eq!(ranks.len(), boundaries.len() + 1, "one rank per degree");
        for (k, m) in boundaries.iter().enumerate() {
            assert_eq!((m.rows, m.cols), (ranks[k], ranks[k + 1]), "∂_{} has the wrong shape", k + 1);
        }
        let cc = ChainComplex {
            dimension: boundaries.len(),
            bases: ranks.iter().map(|&r| (0..r).collect()).collect(),
            boundaries,
        };
        cc.check_square_zero()?;
        Ok(cc)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rank(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, n: usize) -> &[usize] {
        &self.bases[n]
    }

    /// `∂_n` for `1 ≤ n ≤ dimension`.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - 1]
    }

    pub fn check_square_zero(&self) -> Result<(), HomologyError> {
        for n in 2..=self.dimension {
            let (lo, hi) = (self.boundary(n - 1), self.boundary(n));
            for c in 0..hi.cols {
                for r in 0..lo.rows {
                    let s: i128 = (0..lo.cols).map(|k| lo.get(r, k) as i128 * hi.get(k, c) as i128).sum();
                    if s != 0 {
                        return Err(HomologyError::BoundarySquareNonzero { degree: n, column: c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reorders every basis: new position `k` in degree `n` holds old
    /// position `perms[n][k]`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> ChainComplex {
        assert_eq!(perms.len(), self.bases.len());
        let bases = perms
            .iter()
            .zip(&self.bases)
            .map(|(p, b)| p.iter().map(|&k| b[k]).collect())
            .collect();
        let boundaries = (1..=self.dimension)
            .map(|n| {
                let old = self.boundary(n);
                let mut m = IntMatrix::zeros(old.rows, old.cols);
                for (r, &pr) in perms[n - 1].iter().enumerate() {
                    for (c, &pc) in perms[n].iter().enumerate() {
                        m.set(r, c, old.get(pr, pc));
                    }
                }
                m
            })
            .collect();
        ChainComplex {
            dimension: self.dimension,
            bases,
            boundaries,
        }
    }

    /// Every boundary matrix in triplet form, each block headed by
    /// `# d<n> <rows> <cols>`.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for n in 1..=self.dimension {
            let m = self.boundary(n);
            writeln!(out, "# d{n} {} {}", m.rows, m.cols).unwrap();
            out.push_str(&m.to_triplets());
        }
        out
    }
}

/// `∂σ = Σ (−1)^i d_i σ` on nondegenerate simplices, degenerate faces
/// dropped.
pub fn chain_complex(x: &TruncatedSSet) -> Result<ChainComplex, HomologyError> {
    let dimension = x.truncation();
    let bases: Vec<Vec<usize>> = (0..=dimension).map(|n| x.nondegenerate(n).collect()).collect();
    let index: Vec<HashMap<usize, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(k, &s)| (s, k)).collect())
        .collect();
    let boundaries = (1..=dimension)
        .map(|n| {
            let mut m = IntMatrix::zeros(bases[n - 1].len(), bases[n].len());
            for (col, &s) in bases[n].iter().enumerate() {
                for i in 0..=n {
                    if let Some(&row) = index[n - 1].get(&x.face(n, i, s)) {
                        m.add(row, col, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            m
        })
        .collect();
    let cc = ChainComplex {
        dimension,
        bases,
        boundaries,
    };
    cc.check_square_zero()?;
    Ok(cc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    #[serde(serialize_with = "serialize_integers")]
    pub invariants: Vec<BigInt>,
    pub rank: usize,
    /// Machine integers overflowed and the elimination was redone with
    /// arbitrary precision.
    pub arbitrary_precision: bool,
}

trait Entry: Clone + Zero + PartialOrd {
    fn magnitude(&self) -> Option<Self>;
    /// `self − q·b`
    fn minus_times(&self, q: &Self, b: &Self) -> Option<Self>;
    fn quotient(&self, d: &Self) -> Self;
    fn widen(&self) -> BigInt;
}

impl Entry for i64 {
    fn magnitude(&self) -> Option<Self> {
        self.checked_abs()
    }

    fn minus_times(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }

    fn quotient(&self, d: &Self) -> Self {
        self / d
    }

    fn widen(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn magnitude(&self) -> Option<Self> {
        Some(self.abs())
    }

    fn minus_times(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }

    fn quotient(&self, d: &Self) -> Self {
        self / d
    }

    fn widen(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// Diagonalizes by row and column operations, always pivoting on the
/// smallest nonzero magnitude. Returns the diagonal.
fn diagonalize<T: Entry>(mut a: Vec<Vec<T>>, cols: usize) -> Result<Vec<T>, Overflow> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(T, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() {
                    let m = v.magnitude().ok_or(Overflow)?;
                    if best.as_ref().is_none_or(|b| m < b.0) {
                        best = Some((m, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].quotient(&a[t][t]);
                for j in t..cols {
                    a[i][j] = a[i][j].minus_times(&q, &a[t][j]).ok_or(Overflow)?;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].quotient(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    row[j] = row[j].minus_times(&q, &row[t]).ok_or(Overflow)?;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
            // a remainder is now smaller than the pivot; move it in
            let mut best: Option<(T, usize, usize)> = None;
            let line = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            for (i, j) in line {
                if !a[i][j].is_zero() {
                    let m = a[i][j].magnitude().ok_or(Overflow)?;
                    if best.as_ref().is_none_or(|b| m < b.0) {
                        best = Some((m, i, j));
                    }
                }
            }
            let (_, i, j) = best.expect("pivot is nonzero");
            a.swap(t, i);
            for row in a.iter_mut() {
                row.swap(t, j);
            }
        }
        diag.push(a[t][t].clone());
    }
    Ok(diag)
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let small: Vec<Vec<i64>> = m.to_rows();
    let (diag, arbitrary_precision) = match diagonalize(small, m.cols) {
        Ok(d) => (d.iter().map(Entry::widen).collect::<Vec<_>>(), false),
        Err(Overflow) => {
            let big = m
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect();
            match diagonalize::<BigInt>(big, m.cols) {
                Ok(d) => (d, true),
                Err(Overflow) => unreachable!("arbitrary precision does not overflow"),
            }
        }
    };
    let mut invariants: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
    // (d_i, d_j) -> (gcd, lcm) until each divides the next
    for i in 0..invariants.len() {
        for j in i + 1..invariants.len() {
            let g = gcd(&invariants[i], &invariants[j]);
            let l = &invariants[i] / &g * &invariants[j];
            invariants[i] = g;
            invariants[j] = l;
        }
    }
    SmithForm {
        rank: invariants.len(),
        invariants,
        arbitrary_precision,
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn serialize_integers<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(IntegerRepr::from))
}

fn serialize_torsion<S: Serializer>(values: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.iter().map(IntegerRepr::from).collect::<Vec<_>>()))
}

/// JSON number when it fits, decimal string otherwise.
#[derive(Serialize)]
#[serde(untagged)]
enum IntegerRepr {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntegerRepr {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => IntegerRepr::Small(x),
            None => IntegerRepr::Big(v.to_string()),
        }
    }
}

/// `H_n` for `0 ≤ n < truncation`: rank and torsion coefficients. Degrees at
/// or above the truncation are not reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub truncation: usize,
    pub betti: Vec<usize>,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    pub fn degrees(&self) -> usize {
        self.betti.len()
    }
}

pub fn homology_profile(cc: &ChainComplex) -> HomologyProfile {
    let n = cc.dimension();
    let smith: Vec<SmithForm> = (1..=n).map(|k| smith_normal_form(cc.boundary(k))).collect();
    let rank_of = |k: usize| if k == 0 || k > n { 0 } else { smith[k - 1].rank };
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for k in 0..n {
        betti.push(cc.rank(k) - rank_of(k) - rank_of(k + 1));
        torsion.push(smith[k].invariants.iter().filter(|d| !d.is_one()).cloned().collect());
    }
    HomologyProfile {
        truncation: n,
        betti,
        torsion,
    }
}

pub fn classifying_space_profile(c: &Arc<FinCategory>, truncation: usize) -> HomologyProfile {
    let nr = nerve(c, truncation);
    let cc = chain_complex(&nr.sset).expect("nerve boundaries square to zero");
    homology_profile(&cc)
}

/// The classifying space of `∫δ`.
pub fn hocolim_profile(inst: &Instance, truncation: usize) -> HomologyProfile {
    classifying_space_profile(&category_of_elements(inst).category, truncation)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum DifferingInvariant {
    Betti {
        before: usize,
        after: usize,
    },
    Torsion {
        #[serde(serialize_with = "serialize_integers")]
        before: Vec<BigInt>,
        #[serde(serialize_with = "serialize_integers")]
        after: Vec<BigInt>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NonIsomorphicCertified { degree: usize, differing: DifferingInvariant },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CausalEffectVerdict {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub before: HomologyProfile,
    pub after: HomologyProfile,
}

impl CausalEffectVerdict {
    pub fn certified_degree(&self) -> Option<usize> {
        match self.verdict {
            Verdict::NonIsomorphicCertified { degree, .. } => Some(degree),
            Verdict::Inconclusive => None,
        }
    }
}

/// Differing homology in any computed degree certifies that the two
/// classifying spaces are not homotopy equivalent. Agreement proves nothing.
pub fn causal_effect(before: &HomologyProfile, after: &HomologyProfile) -> Result<CausalEffectVerdict, HomologyError> {
    if before.truncation != after.truncation {
        return Err(HomologyError::TruncationMismatch {
            before: before.truncation,
            after: after.truncation,
        });
    }
    let mut verdict = Verdict::Inconclusive;
    for n in 0..before.degrees() {
        let differing = if before.betti[n] != after.betti[n] {
            DifferingInvariant::Betti {
                before: before.betti[n],
                after: after.betti[n],
            }
        } else if before.torsion[n] != after.torsion[n] {
            DifferingInvariant::Torsion {
                before: before.torsion[n].clone(),
                after: after.torsion[n].clone(),
            }
        } else {
            continue;
        };
        verdict = Verdict::NonIsomorphicCertified { degree: n, differing };
        break;
    }
    Ok(CausalEffectVerdict {
        verdict,
        before: before.clone(),
        after: after.clone(),
    })
}

#[cfg(test)]
mod tests;
