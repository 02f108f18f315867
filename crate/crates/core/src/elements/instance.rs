use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ElementsError;
use crate::causal::{dag_to_category, CausalDag, RawDag};
use crate::fincat::{FinCategory, MorId, ObjId, RawCategory, SetFunctor, SetFunctorError};

/// A set-valued functor on a schema whose elements carry external row ids.
/// Element `x` of object `c` is row `rows[c][x]`; each table is sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    functor: SetFunctor,
    rows: Vec<Vec<u64>>,
}

impl Instance {
    /// Builds an instance from sorted-or-not tables and actions on row ids.
    /// Actions missing for a non-identity morphism are derived from a
    /// factorization through morphisms with known actions.
    pub fn from_rows(
        schema: Arc<FinCategory>,
        tables: Vec<Vec<u64>>,
        actions: BTreeMap<MorId, BTreeMap<u64, u64>>,
    ) -> Result<Self, ElementsError> {
        if tables.len() != schema.num_objects() {
            return Err(ElementsError::Shape(format!(
                "expected {} tables, found {}",
                schema.num_objects(),
                tables.len()
            )));
        }
        let mut rows = tables;
        for (c, t) in rows.iter_mut().enumerate() {
            t.sort_unstable();
            if let Some(w) = t.windows(2).find(|w| w[0] == w[1]) {
                return Err(ElementsError::DuplicateRow {
                    object: schema.object_label(c).to_string(),
                    row: w[0],
                });
            }
        }
        let index = |c: ObjId, r: u64| rows[c].binary_search(&r).ok();
        let mut dense: Vec<Option<Vec<usize>>> = vec![None; schema.num_morphisms()];
        for (&m, map) in &actions {
            if m >= schema.num_morphisms() {
                return Err(ElementsError::UnknownMorphism(m.to_string()));
            }
            let (s, t) = (schema.src(m), schema.tgt(m));
            let label = || schema.morphism(m).label.clone();
            if let Some((&r, _)) = map.iter().find(|(&r, _)| index(s, r).is_none()) {
                return Err(ElementsError::DanglingRow { morphism: label(), row: r });
            }
            if let Some((_, &r)) = map.iter().find(|(_, &r)| index(t, r).is_none()) {
                return Err(ElementsError::DanglingRow { morphism: label(), row: r });
            }
            let mut action = Vec::with_capacity(rows[s].len());
            for &r in &rows[s] {
                match map.get(&r) {
                    Some(&img) => action.push(index(t, img).unwrap()),
                    None => {
                        return Err(ElementsError::MissingAction {
                            morphism: label(),
                            row: Some(r),
                        })
                    }
                }
            }
            dense[m] = Some(action);
        }
        for c in schema.object_ids() {
            let id = schema.identity(c);
            dense[id].get_or_insert_with(|| (0..rows[c].len()).collect());
        }
        // derive composites until nothing changes
        loop {
            let mut changed = false;
            for (g, f, gf) in schema.composable_pairs() {
                if dense[gf].is_none() {
                    if let (Some(ag), Some(af)) = (&dense[g], &dense[f]) {
                        let derived = af.iter().map(|&x| ag[x]).collect();
                        dense[gf] = Some(derived);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut out = Vec::with_capacity(dense.len());
        for (m, a) in dense.into_iter().enumerate() {
            match a {
                Some(a) => out.push(a),
                None if rows[schema.src(m)].is_empty() => out.push(Vec::new()),
                None => {
                    return Err(ElementsError::MissingAction {
                        morphism: schema.morphism(m).label.clone(),
                        row: None,
                    })
                }
            }
        }
        let sizes = rows.iter().map(Vec::len).collect();
        let functor = SetFunctor::new(schema.clone(), sizes, out).map_err(|e| match e {
            SetFunctorError::NonFunctorial { g, f, element } => ElementsError::NonFunctorial {
                g: schema.morphism(g).label.clone(),
                f: schema.morphism(f).label.clone(),
                row: rows[schema.src(f)][element],
            },
            SetFunctorError::IdentityNotIdentity { morphism } => ElementsError::NonFunctorial {
                g: schema.morphism(morphism).label.clone(),
                f: schema.morphism(morphism).label.clone(),
                row: 0,
            },
            other => ElementsError::Shape(other.to_string()),
        })?;
        Ok(Instance { functor, rows })
    }

    /// Wraps a set-valued functor, numbering the rows of each table `0..n`.
    pub fn from_set_functor(functor: SetFunctor) -> Self {
        let rows = functor.sizes().iter().map(|&n| (0..n as u64).collect()).collect();
        Instance { functor, rows }
    }

    /// Replaces row ids; each table must be sorted and the right length.
    pub fn with_rows(functor: SetFunctor, rows: Vec<Vec<u64>>) -> Self {
        assert!(rows.iter().map(Vec::len).eq(functor.sizes().iter().copied()));
        assert!(rows.iter().all(|t| t.windows(2).all(|w| w[0] < w[1])));
        Instance { functor, rows }
    }

    pub fn schema(&self) -> &Arc<FinCategory> {
        self.functor.category()
    }

    pub fn functor(&self) -> &SetFunctor {
        &self.functor
    }

    pub fn rows(&self, object: ObjId) -> &[u64] {
        &self.rows[object]
    }

    pub fn all_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn size(&self, object: ObjId) -> usize {
        self.functor.size(object)
    }

    pub fn total_rows(&self) -> usize {
        self.functor.sizes().iter().sum()
    }

    pub fn row_index(&self, object: ObjId, row: u64) -> Option<usize> {
        self.rows[object].binary_search(&row).ok()
    }

    /// Image of a row under a morphism, as a row id.
    pub fn apply(&self, morphism: MorId, row: u64) -> Option<u64> {
        let s = self.schema().src(morphism);
        let t = self.schema().tgt(morphism);
        let x = self.row_index(s, row)?;
        Some(self.rows[t][self.functor.action(morphism)[x]])
    }

    pub fn to_raw(&self) -> RawInstance {
        let schema = self.schema();
        let obj_key = |c: ObjId| {
            let l = schema.object_label(c);
            if schema.find_object(l) == Some(c) {
                l.to_string()
            } else {
                c.to_string()
            }
        };
        let mor_key = |m: MorId| {
            let l = &schema.morphism(m).label;
            if schema.find_morphism(l) == Some(m) {
                l.clone()
            } else {
                m.to_string()
            }
        };
        RawInstance {
            schema: SchemaSpec::Category(schema.to_raw()),
            tables: schema.object_ids().map(|c| (obj_key(c), self.rows[c].clone())).collect(),
            actions: schema
                .morphism_ids()
                .filter(|&m| !schema.is_identity(m))
                .map(|m| {
                    let s = schema.src(m);
                    let map = self.rows[s]
                        .iter()
                        .map(|&r| (r.to_string(), self.apply(m, r).unwrap()))
                        .collect();
                    (mor_key(m), map)
                })
                .collect(),
        }
    }
}

/// A schema given either as a finite category or as a causal DAG (whose
/// free category is used).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemaSpec {
    Category(RawCategory),
    Dag(RawDag),
}

impl SchemaSpec {
    pub fn build(self) -> Result<FinCategory, ElementsError> {
        match self {
            SchemaSpec::Category(raw) => Ok(FinCategory::try_from(raw)?),
            SchemaSpec::Dag(raw) => {
                let g = CausalDag::try_from(raw).map_err(|e| ElementsError::Schema(e.to_string()))?;
                dag_to_category(&g).map_err(|e| ElementsError::Schema(e.to_string()))
            }
        }
    }
}

/// JSON form of an instance. Tables and actions are keyed by object and
/// morphism labels (or numeric ids); action maps are keyed by row id.
/// Missing tables are empty; actions of composites may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub schema: SchemaSpec,
    #[serde(default)]
    pub tables: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, u64>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = ElementsError;

    fn try_from(raw: RawInstance) -> Result<Self, ElementsError> {
        let schema = Arc::new(raw.schema.build()?);
        instance_on(schema, raw.tables, raw.actions)
    }
}

/// Reads tables and actions against an already-built schema.
pub fn instance_on(
    schema: Arc<FinCategory>,
    tables: BTreeMap<String, Vec<u64>>,
    actions: BTreeMap<String, BTreeMap<String, u64>>,
) -> Result<Instance, ElementsError> {
    let mut t = vec![Vec::new(); schema.num_objects()];
    for (key, rows) in tables {
        let c = schema
            .find_object(&key)
            .ok_or_else(|| ElementsError::UnknownObject(key.clone()))?;
        t[c] = rows;
    }
    let mut a = BTreeMap::new();
    for (key, map) in actions {
        let m = schema
            .find_morphism(&key)
            .ok_or_else(|| ElementsError::UnknownMorphism(key.clone()))?;
        let mut parsed = BTreeMap::new();
        for (row, img) in map {
            let r: u64 = row
                .trim()
                .parse()
                .map_err(|_| ElementsError::Shape(format!("row key {row:?} of {key:?} is not an integer")))?;
            parsed.insert(r, img);
        }
        a.insert(m, parsed);
    }
    Instance::from_rows(schema, t, a)
}

/// Binds `variable` to the single row `row`: the table is restricted to that
/// row, and every non-identity morphism into the variable is removed from the
/// schema together with every morphism factoring through one of them.
pub fn do_bind(inst: &Instance, variable: ObjId, row: u64) -> Result<Instance, ElementsError> {
    let schema = inst.schema();
    if variable >= schema.num_objects() {
        return Err(ElementsError::UnknownObject(variable.to_string()));
    }
    let x = inst.row_index(variable, row).ok_or(ElementsError::UnknownRow {
        object: schema.object_label(variable).to_string(),
        row,
    })?;
    let into: Vec<MorId> = schema
        .hom_to(variable)
        .filter(|&m| !schema.is_identity(m))
        .collect();
    let through = |m: MorId| {
        into.iter()
            .any(|&f| schema.hom(variable, schema.tgt(m)).iter().any(|&h| schema.compose(h, f) == Some(m)))
    };
    let (sub, objects, morphisms) = schema.subcategory(|_| true, |m| !schema.is_identity(m) && !through(m))?;
    debug_assert_eq!(objects.len(), schema.num_objects());
    let keep_elem = |c: ObjId, e: usize| c != variable || e == x;
    let renumber = |c: ObjId, e: usize| if c == variable { 0 } else { e };
    let sizes: Vec<usize> = schema
        .object_ids()
        .map(|c| if c == variable { 1 } else { inst.size(c) })
        .collect();
    let actions = morphisms
        .iter()
        .map(|&m| {
            let (s, t) = (schema.src(m), schema.tgt(m));
            inst.functor()
                .action(m)
                .iter()
                .enumerate()
                .filter(|&(e, _)| keep_elem(s, e))
                .map(|(_, &y)| renumber(t, y))
                .collect()
        })
        .collect();
    let functor = SetFunctor::new(Arc::new(sub), sizes, actions).map_err(|e| ElementsError::Shape(e.to_string()))?;
    let mut rows = inst.rows.clone();
    rows[variable] = vec![row];
    Ok(Instance { functor, rows })
}
