use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::category::{dense_order, FinCategory, Morphism, MorId, ObjId, RawMorphism, RawObject};
use super::CategoryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

impl Edge {
    pub fn new(label: impl Into<String>, src: usize, tgt: usize) -> Self {
        Edge {
            label: label.into(),
            src,
            tgt,
        }
    }
}

/// A directed multigraph with labelled vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, CategoryError> {
        for (id, e) in edges.iter().enumerate() {
            for v in [e.src, e.tgt] {
                if v >= vertices.len() {
                    return Err(CategoryError::UnknownObject { morphism: id, object: v });
                }
            }
        }
        Ok(Quiver { vertices, edges })
    }

    /// Convenience constructor from `(src, tgt)` pairs; edges are labelled `a->b`.
    pub fn from_pairs(vertices: &[&str], pairs: &[(usize, usize)]) -> Result<Self, CategoryError> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
        let edges = pairs
            .iter()
            .map(|&(s, t)| Edge {
                label: format!(
                    "{}->{}",
                    vertices.get(s).map(String::as_str).unwrap_or("?"),
                    vertices.get(t).map(String::as_str).unwrap_or("?")
                ),
                src: s,
                tgt: t,
            })
            .collect();
        Quiver::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// A directed cycle as a vertex sequence, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.vertices.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            out[e.src].push(e.tgt);
        }
        let mut mark = vec![Mark::New; n];
        let mut stack_path = Vec::new();

        fn visit(
            v: usize,
            out: &[Vec<usize>],
            mark: &mut [Mark],
            path: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            mark[v] = Mark::Active;
            path.push(v);
            for &w in &out[v] {
                match mark[w] {
                    Mark::Active => {
                        let start = path.iter().position(|&x| x == w).unwrap();
                        let mut cycle = path[start..].to_vec();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::New => {
                        if let Some(c) = visit(w, out, mark, path) {
                            return Some(c);
                        }
                    }
                    Mark::Done => {}
                }
            }
            path.pop();
            mark[v] = Mark::Done;
            None
        }

        for v in 0..n {
            if mark[v] == Mark::New {
                if let Some(c) = visit(v, &out, &mut mark, &mut stack_path) {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn to_raw(&self) -> RawQuiver {
        RawQuiver {
            objects: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, label)| RawObject {
                    id,
                    label: label.clone(),
                })
                .collect(),
            morphisms: self
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| RawMorphism {
                    id,
                    label: e.label.clone(),
                    src: e.src,
                    tgt: e.tgt,
                })
                .collect(),
        }
    }
}

/// JSON form of a quiver: the category schema without identities or composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawQuiver {
    pub objects: Vec<RawObject>,
    pub morphisms: Vec<RawMorphism>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = CategoryError;

    fn try_from(raw: RawQuiver) -> Result<Self, Self::Error> {
        let obj_order = dense_order(&raw.objects, |o| o.id, "vertex")?;
        let edge_order = dense_order(&raw.morphisms, |m| m.id, "edge")?;
        let vertices = obj_order
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
        let edges = edge_order
            .iter()
            .map(|&p| {
                let m = &raw.morphisms[p];
                Edge {
                    label: if m.label.is_empty() {
                        m.id.to_string()
                    } else {
                        m.label.clone()
                    },
                    src: m.src,
                    tgt: m.tgt,
                }
            })
            .collect();
        Quiver::new(vertices, edges)
    }
}

/// The free category on an acyclic quiver, with the edge path behind each morphism.
#[derive(Debug, Clone)]
pub struct FreeCategory {
    pub category: FinCategory,
    /// Start vertex and edge sequence (in traversal order) of each morphism.
    pub paths: Vec<(ObjId, Vec<usize>)>,
}

impl FreeCategory {
    /// Morphism id of the length-one path along `edge`.
    pub fn edge_morphism(&self, edge: usize) -> MorId {
        self.category.num_objects() + edge
    }
}

/// Path category of an acyclic quiver.
///
/// Morphism ids are assigned by path length: identities in vertex order, then
/// edges in edge order (so edge `e` is morphism `V + e`), then longer paths
/// in breadth-first extension order.
pub fn free_category(q: &Quiver) -> Result<FinCategory, CategoryError> {
    free_category_with_paths(q).map(|f| f.category)
}

pub fn free_category_with_paths(q: &Quiver) -> Result<FreeCategory, CategoryError> {
    if let Some(cycle) = q.find_cycle() {
        return Err(CategoryError::CyclicQuiver { cycle });
    }
    let n = q.vertices.len();
    let mut paths: Vec<(ObjId, Vec<usize>)> = (0..n).map(|v| (v, Vec::new())).collect();
    let mut frontier: Vec<usize> = Vec::new();
    for (e, edge) in q.edges.iter().enumerate() {
        frontier.push(paths.len());
        paths.push((edge.src, vec![e]));
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &p in &frontier {
            let end = q.edges[*paths[p].1.last().unwrap()].tgt;
            for (e, edge) in q.edges.iter().enumerate() {
                if edge.src == end {
                    let mut path = paths[p].1.clone();
                    path.push(e);
                    next.push(paths.len());
                    paths.push((paths[p].0, path));
                }
            }
        }
        frontier = next;
    }

    let end_of = |(start, path): &(ObjId, Vec<usize>)| match path.last() {
        Some(&e) => q.edges[e].tgt,
        None => *start,
    };
    let index: HashMap<(ObjId, Vec<usize>), MorId> = paths
        .iter()
        .enumerate()
        .map(|(id, p)| (p.clone(), id))
        .collect();
    let morphisms: Vec<Morphism> = paths
        .iter()
        .map(|p| {
            let label = if p.1.is_empty() {
                format!("id_{}", q.vertices[p.0])
            } else {
                p.1.iter()
                    .rev()
                    .map(|&e| q.edges[e].label.as_str())
                    .collect::<Vec<_>>()
                    .join("∘")
            };
            Morphism::new(label, p.0, end_of(p))
        })
        .collect();
    let mut composites = Vec::new();
    for (g, pg) in paths.iter().enumerate() {
        for (f, pf) in paths.iter().enumerate() {
            if pg.0 == end_of(pf) {
                let mut joined = pf.1.clone();
                joined.extend_from_slice(&pg.1);
                composites.push((g, f, index[&(pf.0, joined)]));
            }
        }
    }
    let category = FinCategory::new(q.vertices.clone(), morphisms, (0..n).collect(), composites)?;
    Ok(FreeCategory { category, paths })
}
