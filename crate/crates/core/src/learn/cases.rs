use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atom::{Atom, AtomSet, Constant};
use crate::dataset::{infer_partition, CaseLevel, Interpretation, Job, PropertyKind, PropertyKinds};
use crate::graph::{graphicalize, insert_case, VertexKind};
use crate::kernel::{features, features_for_case, hash_str, KernelConfig, SparseFeatureVector};
use crate::schema::Schema;

use super::{Label, LearnError, Task};

/// One independently trained prediction task of a job.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskUnit {
    pub name: String,
    pub target: Arc<str>,
    pub level: CaseLevel,
    /// Property column predicted; `None` for truth-value tasks.
    pub property: Option<usize>,
    pub task: Task,
}

/// Split a job into tasks: one per target, or one per property column of
/// targets with several properties. Class lists are collected from `data`.
pub fn task_units(schema: &Schema, job: &Job, kinds: &PropertyKinds, data: &[Interpretation]) -> Vec<TaskUnit> {
    let mut out = Vec::new();
    for t in &job.targets {
        let sig = schema.signature(&t.name).expect("job targets are declared");
        let props: Vec<(usize, Arc<str>)> = sig.property_columns().map(|(c, col)| (c, col.name.clone())).collect();
        if props.is_empty() {
            out.push(TaskUnit {
                name: t.name.to_string(),
                target: t.name.clone(),
                level: t.level,
                property: None,
                task: Task::Binary,
            });
            continue;
        }
        for (col, cname) in &props {
            let task = match kinds.get(&t.name, *col) {
                PropertyKind::Numeric => Task::Regression,
                PropertyKind::Categorical => {
                    let classes: BTreeSet<String> = data
                        .iter()
                        .flat_map(|i| i.atoms_of(&t.name))
                        .map(|a| a.args[*col].to_string())
                        .collect();
                    Task::Multiclass(classes.into_iter().collect())
                }
            };
            let name = if props.len() == 1 {
                t.name.to_string()
            } else {
                format!("{}.{}", t.name, cname)
            };
            out.push(TaskUnit {
                name,
                target: t.name.clone(),
                level: t.level,
                property: Some(*col),
                task,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssembleOptions {
    /// Keep at most this many negative cases per interpretation.
    pub max_negatives: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub interpretation: Arc<str>,
    pub features: SparseFeatureVector,
    pub label: Label,
}

fn property_label(kinds: &PropertyKinds, target: &str, col: usize, v: &Constant) -> Label {
    match (kinds.get(target, col), v.as_f64()) {
        (PropertyKind::Numeric, Some(x)) => Label::Real(x),
        _ => Label::Class(v.to_string()),
    }
}

fn cartesian(sets: &[Vec<Constant>]) -> Vec<Vec<Constant>> {
    let mut out: Vec<Vec<Constant>> = vec![Vec::new()];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                s.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Input and output atoms of one interpretation (or of one slice frame).
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSource {
    pub id: Arc<str>,
    pub x: AtomSet,
    pub y: AtomSet,
}

fn cases_of(
    schema: &Schema,
    unit: &TaskUnit,
    src: &CaseSource,
    kinds: &PropertyKinds,
    kcfg: &KernelConfig,
    opts: &AssembleOptions,
) -> Result<Vec<Case>, LearnError> {
    let gx = graphicalize(schema, kinds, &src.x)?;
    let targets: Vec<&Atom> = src.y.iter().filter(|a| a.predicate == unit.target).collect();
    let sig = schema.signature(&unit.target).expect("declared");
    let id = src.id.clone();

    if unit.level == CaseLevel::Interpretation {
        let label = match unit.property {
            None => Label::Binary(!targets.is_empty()),
            Some(col) => match targets.first() {
                Some(a) => property_label(kinds, &unit.target, col, &a.args[col]),
                None => return Ok(Vec::new()),
            },
        };
        return Ok(vec![Case {
            id: id.to_string(),
            interpretation: id,
            features: features(&gx, kcfg),
            label,
        }]);
    }

    let mut work: Vec<(Atom, Label)> = Vec::new();
    match unit.property {
        Some(col) => {
            for a in targets {
                work.push((a.clone(), property_label(kinds, &unit.target, col, &a.args[col])));
            }
        }
        None => {
            let ids: Vec<Vec<Constant>> = sig
                .identifier_columns()
                .map(|(c, _)| {
                    let set = sig.entity_set_of(c).expect("identifier");
                    gx.vertices()
                        .iter()
                        .filter(|v| v.kind == VertexKind::Entity && v.signature == *set)
                        .filter_map(|v| v.ids.first().cloned())
                        .collect()
                })
                .collect();
            let positives: BTreeSet<&Atom> = targets.into_iter().collect();
            let mut negatives = Vec::new();
            for tuple in cartesian(&ids) {
                let a = Atom::new(&unit.target, tuple);
                if positives.contains(&a) {
                    work.push((a, Label::Binary(true)));
                } else if !src.x.contains(&a) {
                    // atoms already known from the input are not cases
                    negatives.push(a);
                }
            }
            // positives whose entities are missing still become cases
            for p in positives {
                if !work.iter().any(|(a, _)| a == p) {
                    work.push((p.clone(), Label::Binary(true)));
                }
            }
            if let Some(cap) = opts.max_negatives {
                if negatives.len() > cap {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ hash_str(&src.id));
                    negatives.shuffle(&mut rng);
                    negatives.truncate(cap);
                    negatives.sort();
                }
            }
            work.extend(negatives.into_iter().map(|a| (a, Label::Binary(false))));
            work.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }
    work.into_par_iter()
        .map(|(atom, label)| {
            let vp = insert_case(&gx, schema, &atom)?;
            Ok(Case {
                id: format!("{}/{}", src.id, atom),
                interpretation: id.clone(),
                features: features_for_case(&vp, kcfg),
                label,
            })
        })
        .collect()
}

/// Build the i.i.d. cases of one task over the given interpretations, in
/// interpretation order and then atom order.
pub fn assemble_cases(
    schema: &Schema,
    job: &Job,
    unit: &TaskUnit,
    interps: &[Interpretation],
    kinds: &PropertyKinds,
    kcfg: &KernelConfig,
    opts: &AssembleOptions,
) -> Result<Vec<Case>, LearnError> {
    let sources = interps
        .iter()
        .map(|i| {
            let (x, y) = infer_partition(schema, job, i)?;
            Ok(CaseSource { id: i.id.clone(), x, y })
        })
        .collect::<Result<Vec<_>, LearnError>>()?;
    assemble_from_sources(schema, unit, &sources, kinds, kcfg, opts)
}

/// As [`assemble_cases`], with the input/output split already made.
pub fn assemble_from_sources(
    schema: &Schema,
    unit: &TaskUnit,
    sources: &[CaseSource],
    kinds: &PropertyKinds,
    kcfg: &KernelConfig,
    opts: &AssembleOptions,
) -> Result<Vec<Case>, LearnError> {
    let per: Vec<Result<Vec<Case>, LearnError>> = sources
        .par_iter()
        .map(|s| cases_of(schema, unit, s, kinds, kcfg, opts))
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    if out.is_empty() {
        return Err(LearnError::NoCases(unit.name.clone()));
    }
    Ok(out)
}
