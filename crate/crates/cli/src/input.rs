use std::path::Path;
use std::sync::Arc;

use catcausal::causal::{dag_to_category, parse_dot, CausalDag, CausalError, RawDag};
use catcausal::elements::{instance_on, ElementsError, Instance, RawInstance};
use catcausal::homology::HomologyError;
use catcausal::fincat::{
    free_category, CategoryError, FinCategory, Functor, FunctorError, Quiver, RawCategory, RawFunctor, RawQuiver,
};
use catcausal::nerve::NerveError;
use catcausal::simplex::{RawSSet, SimplexError, TruncatedSSet};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

impl From<CausalError> for CliError {
    fn from(e: CausalError) -> Self {
        match e {
            CausalError::Parse { .. } => CliError::Parse(e.to_string()),
            CausalError::TooManyVariables(_) => CliError::Scale(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<NerveError> for CliError {
    fn from(e: NerveError) -> Self {
        match e {
            NerveError::ScaleExceeded { .. } => CliError::Scale(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        })*
    };
}

invalid_from!(CategoryError, FunctorError, ElementsError, SimplexError, HomologyError);

/// Any artifact the tool reads.
#[derive(Debug, Clone)]
pub enum Document {
    Dag(CausalDag),
    Category(FinCategory),
    Quiver(Quiver),
    Instance(Instance),
    Functor(Functor),
    SSet(TruncatedSSet),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Dag(_) => "dag",
            Document::Category(_) => "category",
            Document::Quiver(_) => "quiver",
            Document::Instance(_) => "instance",
            Document::Functor(_) => "functor",
            Document::SSet(_) => "simplicial_set",
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn is_dot(path: &Path, text: &str) -> bool {
    match path.extension().and_then(|e| e.to_str()) {
        Some("dot" | "gv") => true,
        Some("json") => false,
        _ => !text.trim_start().starts_with('{'),
    }
}

/// The kind a document claims to be, before validation.
pub fn guess_kind(path: &Path, text: &str) -> Option<&'static str> {
    if is_dot(path, text) {
        return Some("dag");
    }
    detect_kind(&serde_json::from_str(text).ok()?)
}

fn raw<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse(format!("not a valid {what} document: {e}")))
}

/// The document kind, from the keys of a JSON object.
pub fn detect_kind(v: &Value) -> Option<&'static str> {
    let o = v.as_object()?;
    let has = |k: &str| o.contains_key(k);
    Some(if has("levels") {
        "simplicial_set"
    } else if has("tables") || has("schema") {
        "instance"
    } else if has("source") && has("target") {
        "functor"
    } else if has("variables") {
        "dag"
    } else if has("identities") || has("composition") {
        "category"
    } else if has("objects") && has("morphisms") {
        "quiver"
    } else {
        return None;
    })
}

/// Parses a DOT graph or a JSON category, quiver, DAG, instance, functor or
/// simplicial set. Syntax and shape errors are parse errors; everything the
/// modules reject is a validation error.
pub fn parse_document(path: &Path, text: &str) -> Result<Document, CliError> {
    if is_dot(path, text) {
        return Ok(Document::Dag(parse_dot(text)?));
    }
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("malformed JSON: {e}")))?;
    let kind = detect_kind(&v).ok_or_else(|| CliError::Parse("unrecognized JSON document".into()))?;
    Ok(match kind {
        "simplicial_set" => Document::SSet(TruncatedSSet::try_from(raw::<RawSSet>(v, kind)?)?),
        "instance" => Document::Instance(Instance::try_from(raw::<RawInstance>(v, kind)?)?),
        "functor" => Document::Functor(Functor::try_from(raw::<RawFunctor>(v, kind)?)?),
        "dag" => Document::Dag(CausalDag::try_from(raw::<RawDag>(v, kind)?)?),
        "category" => Document::Category(FinCategory::try_from(raw::<RawCategory>(v, kind)?)?),
        _ => Document::Quiver(Quiver::try_from(raw::<RawQuiver>(v, kind)?)?),
    })
}

pub fn load(path: &Path) -> Result<Document, CliError> {
    parse_document(path, &read(path)?)
}

/// A schema: a DAG, a quiver (through its free category) or a category.
#[derive(Debug, Clone)]
pub struct Model {
    pub category: Arc<FinCategory>,
    pub dag: Option<CausalDag>,
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    match load(path)? {
        Document::Dag(g) => Ok(Model {
            category: Arc::new(dag_to_category(&g)?),
            dag: Some(g),
        }),
        Document::Category(c) => Ok(Model {
            category: Arc::new(c),
            dag: None,
        }),
        Document::Quiver(q) => Ok(Model {
            category: Arc::new(free_category(&q)?),
            dag: None,
        }),
        other => Err(CliError::Invalid(format!(
            "expected a DAG, quiver or category, found a {}",
            other.kind()
        ))),
    }
}

pub fn load_dag(path: &Path) -> Result<CausalDag, CliError> {
    match load(path)? {
        Document::Dag(g) => Ok(g),
        other => Err(CliError::Invalid(format!("expected a DAG, found a {}", other.kind()))),
    }
}

pub fn load_functor(path: &Path) -> Result<Functor, CliError> {
    match load(path)? {
        Document::Functor(f) => Ok(f),
        other => Err(CliError::Invalid(format!("expected a functor, found a {}", other.kind()))),
    }
}

/// Reads an instance on `schema`. The file may omit its own schema; when it
/// carries one, it has to be `schema`.
pub fn load_instance(path: &Path, schema: &Arc<FinCategory>) -> Result<Instance, CliError> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("malformed JSON: {e}")))?;
    if v.get("schema").is_some() {
        let inst = Instance::try_from(raw::<RawInstance>(v, "instance")?)?;
        if **inst.schema() != **schema {
            return Err(CliError::Invalid("instance schema differs from the expected schema".into()));
        }
        return Ok(Instance::with_rows(
            catcausal::fincat::SetFunctor::new(
                schema.clone(),
                inst.functor().sizes().to_vec(),
                inst.functor().actions().to_vec(),
            )
            .expect("same category"),
            inst.all_rows().to_vec(),
        ));
    }
    #[derive(serde::Deserialize)]
    struct Tables {
        #[serde(default)]
        tables: std::collections::BTreeMap<String, Vec<u64>>,
        #[serde(default)]
        actions: std::collections::BTreeMap<String, std::collections::BTreeMap<String, u64>>,
    }
    let t: Tables = raw(v, "instance")?;
    Ok(instance_on(schema.clone(), t.tables, t.actions)?)
}
