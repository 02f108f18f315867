//! Causal DAGs, interventions, imsets and Markov equivalence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{free_category, free_category_with_paths, CategoryError, FinCategory, Functor, FunctorError, Quiver};

pub const MAX_VARIABLES: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CausalError {
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unknown edge {cause:?} -> {effect:?}")]
    UnknownEdge { cause: String, effect: String },
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {cause:?} -> {effect:?}")]
    DuplicateEdge { cause: String, effect: String },
    #[error("directed cycle through {0:?}")]
    Cycle(Vec<String>),
    #[error("{0} variables exceed the limit of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("elementary imset arguments overlap")]
    OverlappingArguments,
    #[error("imsets are over different ground sets")]
    GroundSetMismatch,
    #[error("DAGs are over different variable sets")]
    VariableSetMismatch,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

/// A DAG over named variables. Edges are `(cause, effect)` index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalDag {
    variables: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl CausalDag {
    pub fn new(variables: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, CausalError> {
        if variables.len() > MAX_VARIABLES {
            return Err(CausalError::TooManyVariables(variables.len()));
        }
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !seen.insert(v) {
                return Err(CausalError::DuplicateVariable(v.clone()));
            }
        }
        let mut edge_set = BTreeSet::new();
        for &(a, b) in &edges {
            for x in [a, b] {
                if x >= variables.len() {
                    return Err(CausalError::UnknownVariable(x.to_string()));
                }
            }
            if a == b {
                return Err(CausalError::SelfLoop(variables[a].clone()));
            }
            if !edge_set.insert((a, b)) {
                return Err(CausalError::DuplicateEdge {
                    cause: variables[a].clone(),
                    effect: variables[b].clone(),
                });
            }
        }
        let g = CausalDag { variables, edges };
        if let Some(cycle) = g.to_quiver().find_cycle() {
            return Err(CausalError::Cycle(cycle.iter().map(|&v| g.variables[v].clone()).collect()));
        }
        Ok(g)
    }

    /// Builds a DAG from variable names and name pairs.
    pub fn from_names(variables: &[&str], edges: &[(&str, &str)]) -> Result<Self, CausalError> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let find = |x: &str| {
                vars.iter()
                    .position(|v| v == x)
                    .ok_or_else(|| CausalError::UnknownVariable(x.to_string()))
            };
            pairs.push((find(a)?, find(b)?));
        }
        CausalDag::new(vars, pairs)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Parent set of `v` as a bitmask.
    pub fn parents(&self, v: usize) -> u64 {
        self.edges
            .iter()
            .filter(|e| e.1 == v)
            .fold(0, |m, e| m | 1 << e.0)
    }

    pub fn to_quiver(&self) -> Quiver {
        let names: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        Quiver::from_pairs(&names, &self.edges).expect("edges reference known variables")
    }

    /// Unordered skeleton as sorted pairs.
    pub fn skeleton(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }

    pub fn to_raw(&self) -> RawDag {
        RawDag {
            variables: self.variables.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [self.variables[a].clone(), self.variables[b].clone()])
                .collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in &self.variables {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.variables[a], self.variables[b]);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDag {
    pub variables: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl TryFrom<RawDag> for CausalDag {
    type Error = CausalError;

    fn try_from(raw: RawDag) -> Result<Self, CausalError> {
        let vars: Vec<&str> = raw.variables.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> = raw.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        CausalDag::from_names(&vars, &edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Intervention {
    DeleteEdge { cause: String, effect: String },
    DoVariable { variable: String },
}

/// The free category on the DAG's quiver.
pub fn dag_to_category(g: &CausalDag) -> Result<FinCategory, CausalError> {
    Ok(free_category(&g.to_quiver())?)
}

pub fn intervene(g: &CausalDag, iv: &Intervention) -> Result<CausalDag, CausalError> {
    let find = |x: &str| g.variable(x).ok_or_else(|| CausalError::UnknownVariable(x.to_string()));
    let edges = match iv {
        Intervention::DeleteEdge { cause, effect } => {
            let e = (find(cause)?, find(effect)?);
            if !g.has_edge(e.0, e.1) {
                return Err(CausalError::UnknownEdge {
                    cause: cause.clone(),
                    effect: effect.clone(),
                });
            }
            g.edges.iter().copied().filter(|&x| x != e).collect()
        }
        Intervention::DoVariable { variable } => {
            let v = find(variable)?;
            g.edges.iter().copied().filter(|e| e.1 != v).collect()
        }
    };
    Ok(CausalDag {
        variables: g.variables.clone(),
        edges,
    })
}

/// The inclusion of the intervened DAG's path category into the original one.
pub fn intervention_inclusion(g: &CausalDag, iv: &Intervention) -> Result<Functor, CausalError> {
    let h = intervene(g, iv)?;
    let big = free_category_with_paths(&g.to_quiver())?;
    let small = free_category_with_paths(&h.to_quiver())?;
    let edge_map: Vec<usize> = h
        .edges
        .iter()
        .map(|e| g.edges.iter().position(|x| x == e).expect("intervention only deletes edges"))
        .collect();
    let index: HashMap<&(usize, Vec<usize>), usize> = big.paths.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let morphisms = small
        .paths
        .iter()
        .map(|(start, path)| index[&(*start, path.iter().map(|&e| edge_map[e]).collect())])
        .collect();
    Ok(Functor::new(
        std::sync::Arc::new(small.category),
        std::sync::Arc::new(big.category),
        (0..g.num_variables()).collect(),
        morphisms,
    )?)
}

/// An integer- (or rational-) valued function on the subsets of a ground set,
/// stored sparsely with subsets as bitmasks. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Imset<C = i64> {
    ground: Vec<String>,
    coeffs: BTreeMap<u64, C>,
}

pub type StructuralImset = Imset<Ratio<i64>>;

impl<C: Signed + Copy> Imset<C> {
    pub fn zero(ground: Vec<String>) -> Self {
        Imset {
            ground,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    /// The same function over `ground`, which must hold the same names in
    /// any order.
    pub fn reindexed(&self, ground: &[String]) -> Result<Imset<C>, CausalError> {
        if ground.len() != self.ground.len() {
            return Err(CausalError::GroundSetMismatch);
        }
        let to: Vec<u64> = self
            .ground
            .iter()
            .map(|x| ground.iter().position(|y| y == x).map(|i| 1u64 << i))
            .collect::<Option<_>>()
            .ok_or(CausalError::GroundSetMismatch)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &v)| {
                let mask = (0..to.len()).filter(|&i| k >> i & 1 == 1).fold(0, |m, i| m | to[i]);
                (mask, v)
            })
            .collect();
        Ok(Imset {
            ground: ground.to_vec(),
            coeffs,
        })
    }

    pub fn add_delta(&mut self, subset: u64, c: C) {
        let entry = self.coeffs.entry(subset).or_insert_with(C::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&subset);
        }
    }

    pub fn coeff(&self, subset: u64) -> C {
        self.coeffs.get(&subset).copied().unwrap_or_else(C::zero)
    }

    /// Nonzero coefficients in increasing bitmask order.
    pub fn support(&self) -> impl Iterator<Item = (u64, C)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> C {
        self.coeffs.values().fold(C::zero(), |a, &b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn subset_name(&self, subset: u64) -> String {
        subset_name(&self.ground, subset)
    }

    /// Renders as `δ_∅ - δ_a + δ_{ab}`, terms by size then bitmask.
    pub fn to_delta_string(&self) -> String
    where
        C: std::fmt::Display,
    {
        let mut terms: Vec<(u64, C)> = self.support().collect();
        terms.sort_by_key(|&(k, _)| (k.count_ones(), k));
        let mut s = String::new();
        for (k, (mask, c)) in terms.into_iter().enumerate() {
            let members: Vec<&str> = (0..self.ground.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.ground[i].as_str())
                .collect();
            let name = match members.len() {
                0 => "δ_∅".to_string(),
                1 if members[0].chars().count() == 1 => format!("δ_{}", members[0]),
                _ => format!("δ_{{{}}}", members.join("")),
            };
            let neg = c.is_negative();
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}") };
            match (k, neg) {
                (0, false) => {}
                (0, true) => s.push('-'),
                (_, false) => s.push_str(" + "),
                (_, true) => s.push_str(" - "),
            }
            s.push_str(&coef);
            s.push_str(&name);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl Imset<i64> {
    pub fn to_rational(&self) -> StructuralImset {
        Imset {
            ground: self.ground.clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, Ratio::from_integer(v))).collect(),
        }
    }

    pub fn to_raw(&self) -> RawImset {
        RawImset {
            ground: self.ground.clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (self.subset_name(k), v)).collect(),
        }
    }
}

impl<C: Signed + Copy> Add for &Imset<C> {
    type Output = Result<Imset<C>, CausalError>;
    fn add(self, rhs: &Imset<C>) -> Self::Output {
        let rhs = rhs.reindexed(&self.ground)?;
        let mut out = self.clone();
        for (k, v) in rhs.support() {
            out.add_delta(k, v);
        }
        Ok(out)
    }
}

impl<C: Signed + Copy> Neg for &Imset<C> {
    type Output = Imset<C>;
    fn neg(self) -> Imset<C> {
        Imset {
            ground: self.ground.clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }
}

impl<C: Signed + Copy> Sub for &Imset<C> {
    type Output = Result<Imset<C>, CausalError>;
    fn sub(self, rhs: &Imset<C>) -> Self::Output {
        self + &(-rhs)
    }
}

fn subset_name(ground: &[String], subset: u64) -> String {
    let members: Vec<&str> = (0..ground.len())
        .filter(|&i| subset >> i & 1 == 1)
        .map(|i| ground[i].as_str())
        .collect();
    members.join(",")
}

/// JSON form; subsets are comma-joined member names in ground order, the
/// empty set is `""`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawImset {
    pub ground: Vec<String>,
    pub coeffs: BTreeMap<String, i64>,
}

impl TryFrom<RawImset> for Imset<i64> {
    type Error = CausalError;

    fn try_from(raw: RawImset) -> Result<Self, CausalError> {
        if raw.ground.len() > MAX_VARIABLES {
            return Err(CausalError::TooManyVariables(raw.ground.len()));
        }
        let mut u = Imset::zero(raw.ground.clone());
        for (key, c) in raw.coeffs {
            let mut mask = 0u64;
            for name in key.split(',').map(str::trim).filter(|s| !s.is_empty() && *s != "∅") {
                let i = raw
                    .ground
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| CausalError::UnknownVariable(name.to_string()))?;
                mask |= 1 << i;
            }
            u.add_delta(mask, c);
        }
        Ok(u)
    }
}

/// `u_G = δ_V - δ_∅ + Σ_i (δ_{Pa_i} - δ_{i ∪ Pa_i})`.
pub fn standard_imset(g: &CausalDag) -> Imset {
    let mut u = Imset::zero(g.variables.clone());
    let all = if g.num_variables() == 64 {
        u64::MAX
    } else {
        (1u64 << g.num_variables()) - 1
    };
    u.add_delta(all, 1);
    u.add_delta(0, -1);
    for i in 0..g.num_variables() {
        let pa = g.parents(i);
        u.add_delta(pa, 1);
        u.add_delta(pa | 1 << i, -1);
    }
    u
}

/// `δ_{abA} + δ_A - δ_{aA} - δ_{bA}` for the triple `(a, b | A)`.
pub fn elementary_imset(ground: &[String], a: usize, b: usize, given: u64) -> Result<Imset, CausalError> {
    if ground.len() > MAX_VARIABLES {
        return Err(CausalError::TooManyVariables(ground.len()));
    }
    for x in [a, b] {
        if x >= ground.len() {
            return Err(CausalError::UnknownVariable(x.to_string()));
        }
    }
    if given >> ground.len() != 0 {
        return Err(CausalError::UnknownVariable(format!("mask {given:#b}")));
    }
    let (ma, mb) = (1u64 << a, 1u64 << b);
    if a == b || given & (ma | mb) != 0 {
        return Err(CausalError::OverlappingArguments);
    }
    let mut u = Imset::zero(ground.to_vec());
    u.add_delta(ma | mb | given, 1);
    u.add_delta(given, 1);
    u.add_delta(ma | given, -1);
    u.add_delta(mb | given, -1);
    Ok(u)
}

/// Variables are matched by name; the ground sets must agree as sets.
pub fn imset_equal<C: Signed + Copy>(u: &Imset<C>, v: &Imset<C>) -> Result<bool, CausalError> {
    Ok(u.coeffs == v.reindexed(&u.ground)?.coeffs)
}

/// Immoralities `(a, b, c)`: `a -> b <- c`, `a < c`, `a` and `c` non-adjacent.
pub fn enumerate_immoralities(g: &CausalDag) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 0..g.num_variables() {
        let pa = g.parents(b);
        for a in 0..g.num_variables() {
            for c in a + 1..g.num_variables() {
                if pa >> a & 1 == 1 && pa >> c & 1 == 1 && !g.adjacent(a, c) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "feature", rename_all = "snake_case")]
pub enum MarkovDifference {
    /// Adjacent in exactly one of the graphs.
    Skeleton { a: String, b: String, in_first: bool },
    /// An immorality present in exactly one of the graphs.
    Immorality {
        a: String,
        b: String,
        c: String,
        in_first: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub equivalent: bool,
    pub witness: Option<MarkovDifference>,
}

/// Same skeleton and same immoralities. Variables are matched by name.
pub fn markov_equivalent(g1: &CausalDag, g2: &CausalDag) -> Result<MarkovReport, CausalError> {
    let set1: BTreeSet<&String> = g1.variables.iter().collect();
    let set2: BTreeSet<&String> = g2.variables.iter().collect();
    if set1 != set2 {
        return Err(CausalError::VariableSetMismatch);
    }
    let to1: Vec<usize> = g2.variables.iter().map(|v| g1.variable(v).unwrap()).collect();
    let name = |i: usize| g1.variables[i].clone();
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let s1 = g1.skeleton();
    let s2: BTreeSet<(usize, usize)> = g2.skeleton().iter().map(|&(a, b)| norm(to1[a], to1[b])).collect();
    if let Some(&(a, b)) = s1.symmetric_difference(&s2).next() {
        return Ok(MarkovReport {
            equivalent: false,
            witness: Some(MarkovDifference::Skeleton {
                a: name(a),
                b: name(b),
                in_first: s1.contains(&(a, b)),
            }),
        });
    }
    let i1: BTreeSet<(usize, usize, usize)> = enumerate_immoralities(g1).into_iter().collect();
    let i2: BTreeSet<(usize, usize, usize)> = enumerate_immoralities(g2)
        .into_iter()
        .map(|(a, b, c)| {
            let (a, c) = norm(to1[a], to1[c]);
            (a, to1[b], c)
        })
        .collect();
    if let Some(&(a, b, c)) = i1.symmetric_difference(&i2).next() {
        return Ok(MarkovReport {
            equivalent: false,
            witness: Some(MarkovDifference::Immorality {
                a: name(a),
                b: name(b),
                c: name(c),
                in_first: i1.contains(&(a, b, c)),
            }),
        });
    }
    Ok(MarkovReport {
        equivalent: true,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Id(String),
    Arrow,
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, CausalError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1;
    let err = |line, message: String| CausalError::Parse { line, message };
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.next_if(|&c| c != '\n').is_some() {}
            }
            '/' => {
                chars.next();
                match chars.next() {
                    Some('/') => while chars.next_if(|&c| c != '\n').is_some() {},
                    Some('*') => {
                        let mut prev = ' ';
                        loop {
                            match chars.next() {
                                None => return Err(err(line, "unterminated comment".into())),
                                Some('/') if prev == '*' => break,
                                Some(c) => {
                                    if c == '\n' {
                                        line += 1;
                                    }
                                    prev = c;
                                }
                            }
                        }
                    }
                    _ => return Err(err(line, "unexpected '/'".into())),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(err(line, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => {
                            if let Some(e) = chars.next() {
                                s.push(e);
                            }
                        }
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                    }
                }
                out.push((Token::Id(s), line));
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        out.push((Token::Arrow, line));
                    }
                    Some('-') => return Err(err(line, "undirected edge '--' in a DAG".into())),
                    _ => {
                        let mut s = String::from("-");
                        while let Some(c) = chars.next_if(|c| c.is_ascii_digit() || *c == '.') {
                            s.push(c);
                        }
                        out.push((Token::Id(s), line));
                    }
                }
            }
            '{' | '}' | ';' | '[' | ']' | '=' | ',' => {
                chars.next();
                out.push((Token::Sym(c), line));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(c) = chars.next_if(|c| c.is_alphanumeric() || *c == '_' || *c == '.') {
                    s.push(c);
                }
                out.push((Token::Id(s), line));
            }
            other => return Err(err(line, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Parses a `digraph` with node and edge statements. Attributes are ignored;
/// variables are ordered by first appearance.
pub fn parse_dot(src: &str) -> Result<CausalDag, CausalError> {
    let tokens = tokenize(src)?;
    let mut pos = 0;
    let last_line = tokens.last().map_or(1, |t| t.1);
    let line_at = |p: usize| tokens.get(p).map_or(last_line, |t| t.1);
    let err = |p: usize, m: &str| CausalError::Parse {
        line: line_at(p),
        message: m.to_string(),
    };
    let is_kw = |t: Option<&(Token, usize)>, kw: &str| matches!(t, Some((Token::Id(s), _)) if s.eq_ignore_ascii_case(kw));

    if is_kw(tokens.get(pos), "strict") {
        pos += 1;
    }
    if !is_kw(tokens.get(pos), "digraph") {
        return Err(err(pos, "expected 'digraph'"));
    }
    pos += 1;
    if let Some((Token::Id(_), _)) = tokens.get(pos) {
        pos += 1;
    }
    if tokens.get(pos).map(|t| &t.0) != Some(&Token::Sym('{')) {
        return Err(err(pos, "expected '{'"));
    }
    pos += 1;

    let mut variables: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let intern = |name: &str, vars: &mut Vec<String>| match vars.iter().position(|v| v == name) {
        Some(i) => i,
        None => {
            vars.push(name.to_string());
            vars.len() - 1
        }
    };
    let skip_attrs = |pos: &mut usize| -> Result<(), CausalError> {
        while tokens.get(*pos).map(|t| &t.0) == Some(&Token::Sym('[')) {
            loop {
                *pos += 1;
                match tokens.get(*pos).map(|t| &t.0) {
                    None => return Err(err(*pos, "unterminated attribute list")),
                    Some(Token::Sym(']')) => break,
                    _ => {}
                }
            }
            *pos += 1;
        }
        Ok(())
    };
    loop {
        match tokens.get(pos).map(|t| &t.0) {
            None => return Err(err(pos, "expected '}'")),
            Some(Token::Sym('}')) => {
                pos += 1;
                break;
            }
            Some(Token::Sym(';')) => pos += 1,
            Some(Token::Id(id)) => {
                let lower = id.to_ascii_lowercase();
                if matches!(lower.as_str(), "node" | "edge" | "graph") {
                    pos += 1;
                    skip_attrs(&mut pos)?;
                    continue;
                }
                if lower == "subgraph" {
                    return Err(err(pos, "subgraphs are not supported"));
                }
                if tokens.get(pos + 1).map(|t| &t.0) == Some(&Token::Sym('=')) {
                    pos += 3;
                    continue;
                }
                let mut chain = vec![intern(id, &mut variables)];
                pos += 1;
                while tokens.get(pos).map(|t| &t.0) == Some(&Token::Arrow) {
                    match tokens.get(pos + 1).map(|t| &t.0) {
                        Some(Token::Id(next)) => chain.push(intern(next, &mut variables)),
                        _ => return Err(err(pos + 1, "expected a node after '->'")),
                    }
                    pos += 2;
                }
                skip_attrs(&mut pos)?;
                for w in chain.windows(2) {
                    if !edges.contains(&(w[0], w[1])) {
                        edges.push((w[0], w[1]));
                    }
                }
            }
            Some(_) => return Err(err(pos, "unexpected token")),
        }
    }
    if pos != tokens.len() {
        return Err(err(pos, "trailing input after graph"));
    }
    CausalDag::new(variables, edges)
}
