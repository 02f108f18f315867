use std::path::Path;

use catcausal::causal::{
    imset_equal, intervene, intervention_inclusion, markov_equivalent, standard_imset, Intervention, RawDag,
    RawImset,
};
use catcausal::elements::patterns::{collider_query, source_edge_query};
use catcausal::elements::{
    do_bind, migrate_left_kan, migrate_pullback, migrate_right_kan, ElementsError, Instance, RawInstance,
};
use catcausal::fincat::free_category;
use catcausal::homology::{causal_effect, chain_complex, hocolim_profile, homology_profile, CausalEffectVerdict};
use catcausal::nerve::nerve;
use serde::Serialize;
use serde_json::Value;

use crate::input::{self, Document};
use crate::{CliError, Command, Config, Failure, MigrationKind, Pattern};

fn to_value<T: Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

pub fn dispatch(command: &Command, config: &Config) -> Result<Value, Failure> {
    let truncation = config.truncation as usize;
    match command {
        Command::Validate { path } => validate(path),
        Command::Nerve { model } => {
            let m = input::load_model(model)?;
            Ok(to_value(&nerve(&m.category, truncation).to_raw()))
        }
        Command::Homology { model, triplets } => {
            let m = input::load_model(model)?;
            let cc = chain_complex(&nerve(&m.category, truncation).sset)?;
            if let Some(out) = triplets {
                std::fs::write(out, cc.to_triplets()).map_err(|source| CliError::Io {
                    path: out.display().to_string(),
                    source,
                })?;
            }
            Ok(to_value(&homology_profile(&cc)))
        }
        Command::Imset { dag, other, compare } => match (other, compare) {
            (Some(other), true) => {
                let (u, v) = (standard_imset(&input::load_dag(dag)?), standard_imset(&input::load_dag(other)?));
                let equal = imset_equal(&u, &v)?;
                Ok(to_value(&ImsetComparison {
                    verdict: if equal { "equal" } else { "different" },
                    equal,
                    first: u.to_raw(),
                    second: v.to_raw(),
                }))
            }
            (Some(_), false) => Err(CliError::Invalid("a second DAG needs --compare".into()).into()),
            (None, _) => {
                let u = standard_imset(&input::load_dag(dag)?);
                Ok(to_value(&ImsetReport {
                    expression: u.to_delta_string(),
                    imset: u.to_raw(),
                }))
            }
        },
        Command::MarkovEq { first, second } => {
            let report = markov_equivalent(&input::load_dag(first)?, &input::load_dag(second)?)?;
            Ok(to_value(&report))
        }
        Command::Intervene {
            dag,
            delete_edge,
            do_variable,
        } => {
            let g = input::load_dag(dag)?;
            let intervention = match (delete_edge, do_variable) {
                (Some(e), _) => {
                    let (cause, effect) = e
                        .split_once("->")
                        .ok_or_else(|| CliError::Invalid(format!("edge {e:?} is not of the form CAUSE->EFFECT")))?;
                    Intervention::DeleteEdge {
                        cause: cause.trim().to_string(),
                        effect: effect.trim().to_string(),
                    }
                }
                (None, Some(v)) => Intervention::DoVariable { variable: v.clone() },
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let h = intervene(&g, &intervention)?;
            Ok(to_value(&IntervenedReport {
                intervention,
                dag: h.to_raw(),
            }))
        }
        Command::Query {
            model,
            instance,
            pattern,
            morphism,
        } => {
            let m = input::load_model(model)?;
            let inst = input::load_instance(instance, &m.category)?;
            match pattern {
                Pattern::Collider => Ok(to_value(&collider_query(&inst)?)),
                Pattern::SourceEdge => {
                    let s = m
                        .category
                        .find_morphism(morphism)
                        .ok_or_else(|| ElementsError::UnknownMorphism(morphism.clone()))?;
                    Ok(to_value(&source_edge_query(&inst, s)?))
                }
            }
        }
        Command::Migrate { functor, instance, kind } => {
            let f = input::load_functor(functor)?;
            let out = match kind {
                MigrationKind::Pullback => migrate_pullback(&f, &input::load_instance(instance, f.target())?)?,
                MigrationKind::Left => migrate_left_kan(&f, &input::load_instance(instance, f.source())?)?.instance,
                MigrationKind::Right => migrate_right_kan(&f, &input::load_instance(instance, f.source())?)?.instance,
            };
            Ok(to_value(&MigrationReport {
                kind: match kind {
                    MigrationKind::Pullback => "pullback",
                    MigrationKind::Left => "left",
                    MigrationKind::Right => "right",
                },
                instance: out.to_raw(),
            }))
        }
        Command::Effect {
            model,
            instance,
            intervention,
        } => {
            let m = input::load_model(model)?;
            let inst = input::load_instance(instance, &m.category)?;
            let after = match intervention {
                None => inst.clone(),
                Some(spec) => apply_do(&m, &inst, spec)?,
            };
            let result = causal_effect(&hocolim_profile(&inst, truncation), &hocolim_profile(&after, truncation))?;
            Ok(to_value(&EffectReport {
                intervention: intervention.clone(),
                result,
            }))
        }
    }
}

/// `VAR=ROW` binds the variable to a row; a bare `VAR` pulls the instance
/// back along the inclusion of the intervened DAG.
fn apply_do(m: &input::Model, inst: &Instance, spec: &str) -> Result<Instance, Failure> {
    match spec.split_once('=') {
        Some((var, row)) => {
            let var = var.trim();
            let object = m
                .category
                .find_object(var)
                .ok_or_else(|| ElementsError::UnknownObject(var.to_string()))?;
            let row: u64 = row
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("row {row:?} is not an integer")))?;
            Ok(do_bind(inst, object, row)?)
        }
        None => {
            let g = m
                .dag
                .as_ref()
                .ok_or_else(|| CliError::Invalid("--do VAR needs a DAG model".into()))?;
            let f = intervention_inclusion(
                g,
                &Intervention::DoVariable {
                    variable: spec.trim().to_string(),
                },
            )?;
            Ok(migrate_pullback(&f, inst)?)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub kind: Option<&'static str>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ImsetReport {
    pub imset: RawImset,
    pub expression: String,
}

#[derive(Debug, Serialize)]
pub struct ImsetComparison {
    pub verdict: &'static str,
    pub equal: bool,
    pub first: RawImset,
    pub second: RawImset,
}

#[derive(Debug, Serialize)]
pub struct IntervenedReport {
    pub intervention: Intervention,
    pub dag: RawDag,
}

#[derive(Debug, Serialize)]
pub struct MigrationReport {
    pub kind: &'static str,
    pub instance: RawInstance,
}

#[derive(Debug, Serialize)]
pub struct EffectReport {
    pub intervention: Option<String>,
    #[serde(flatten)]
    pub result: CausalEffectVerdict,
}

/// One line describing a valid document.
pub fn summarize(doc: &Document) -> Result<String, CliError> {
    Ok(match doc {
        Document::Dag(g) => format!("{} variables, {} edges, acyclic", g.num_variables(), g.edges().len()),
        Document::Category(c) => format!("{} objects, {} morphisms, associative", c.num_objects(), c.num_morphisms()),
        Document::Quiver(q) => {
            let c = free_category(q)?;
            format!(
                "{} vertices, {} edges, acyclic, free category has {} morphisms",
                q.vertices().len(),
                q.edges().len(),
                c.num_morphisms()
            )
        }
        Document::Instance(i) => format!(
            "{} objects, {} rows, functorial",
            i.schema().num_objects(),
            i.total_rows()
        ),
        Document::Functor(f) => format!(
            "{} objects to {} objects, functorial",
            f.source().num_objects(),
            f.target().num_objects()
        ),
        Document::SSet(x) => format!(
            "truncation {}, simplices per level {:?}, simplicial identities hold",
            x.truncation(),
            x.counts()
        ),
    })
}

fn validate(path: &Path) -> Result<Value, Failure> {
    let text = input::read(path)?;
    let kind = input::guess_kind(path, &text);
    let outcome = input::parse_document(path, &text).and_then(|doc| summarize(&doc));
    match outcome {
        Ok(summary) => Ok(to_value(&ValidationReport {
            kind,
            valid: true,
            summary: Some(summary),
            error: None,
        })),
        Err(error @ (CliError::Invalid(_) | CliError::Scale(_))) => Err(Failure {
            report: Some(to_value(&ValidationReport {
                kind,
                valid: false,
                summary: None,
                error: Some(error.to_string()),
            })),
            error,
        }),
        Err(error) => Err(error.into()),
    }
}
