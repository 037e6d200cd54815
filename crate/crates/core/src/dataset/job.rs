use std::fmt;
use std::sync::Arc;

use crate::atom::AtomSet;
use crate::rules::dependency_closure;
use crate::schema::Schema;

use super::{DatasetError, Interpretation, PropertyKind, PropertyKinds};

/// What a single case is, by relational arity of the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLevel {
    /// n = 0: the whole interpretation.
    Interpretation,
    /// n = 1: one entity.
    Entity,
    /// n >= 2: a tuple of entities.
    Link,
}

/// What is predicted for each case, by property count of the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    /// m = 0: whether the atom is true.
    Binary,
    /// m = 1, categorical property.
    Multiclass,
    /// m = 1, numeric property.
    Regression,
    /// m > 1: one independent task per property.
    Multitask,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub name: Arc<str>,
    pub level: CaseLevel,
    pub task: TaskKind,
    pub relational_arity: usize,
    pub property_count: usize,
}

impl Target {
    pub fn kind_name(&self) -> &'static str {
        use CaseLevel::*;
        use TaskKind::*;
        match (self.level, self.task) {
            (Interpretation, Binary) => "binary-classification-of-interpretations",
            (Interpretation, Multiclass | Regression) => "multiclass/regression-on-interpretations",
            (Interpretation, Multitask) => "multitask-on-interpretations",
            (Entity, Binary) => "binary-classification-of-entities",
            (Entity, Multiclass | Regression) => "multiclass/regression-on-entities",
            (Entity, Multitask) => "multitask-on-entities",
            (Link, Binary) => "link-prediction",
            (Link, Multiclass | Regression) => "attributed-link-prediction",
            (Link, Multitask) => "multitask-attributed-link-prediction",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.kind_name())
    }
}

/// A non-empty list of target signatures with the kind inferred for each.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub targets: Vec<Target>,
}

impl Job {
    pub fn new(schema: &Schema, names: &[&str], kinds: &PropertyKinds) -> Result<Job, DatasetError> {
        if names.is_empty() {
            return Err(DatasetError::UnknownTarget(String::new()));
        }
        let mut targets = Vec::new();
        for name in names {
            let sig = schema
                .signature(name)
                .ok_or_else(|| DatasetError::UnknownTarget(name.to_string()))?;
            if sig.is_entity() {
                return Err(DatasetError::UnsupportedTarget(name.to_string()));
            }
            let n = sig.relational_arity();
            let m = sig.property_count();
            let level = match n {
                0 => CaseLevel::Interpretation,
                1 => CaseLevel::Entity,
                _ => CaseLevel::Link,
            };
            let task = match m {
                0 => TaskKind::Binary,
                1 => {
                    let (col, _) = sig.property_columns().next().expect("m = 1");
                    match kinds.get(name, col) {
                        PropertyKind::Numeric => TaskKind::Regression,
                        PropertyKind::Categorical => TaskKind::Multiclass,
                    }
                }
                _ => TaskKind::Multitask,
            };
            targets.push(Target {
                name: sig.name.clone(),
                level,
                task,
                relational_arity: n,
                property_count: m,
            });
        }
        Ok(Job { targets })
    }

    pub fn is_multitask(&self) -> bool {
        self.targets.len() > 1 || self.targets.iter().any(|t| t.task == TaskKind::Multitask)
    }

    pub fn target_names(&self) -> Vec<&str> {
        self.targets.iter().map(|t| &*t.name).collect()
    }
}

/// Split an interpretation into input `x` and output `y`. `y` holds the
/// target atoms and every atom of a predicate depending on a target.
pub fn infer_partition(
    schema: &Schema,
    job: &Job,
    interp: &Interpretation,
) -> Result<(AtomSet, AtomSet), DatasetError> {
    for t in &job.targets {
        if !schema.is_declared(&t.name) {
            return Err(DatasetError::UnknownTarget(t.name.to_string()));
        }
    }
    let roots = job.target_names();
    let out_preds = dependency_closure(&schema.all_rules(), &roots);
    let (y, x): (AtomSet, AtomSet) = interp
        .atoms
        .iter()
        .cloned()
        .partition(|a| out_preds.contains(&a.predicate) || roots.contains(&&*a.predicate));
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::schema::parse_domain;

    fn load(domain: &str) -> (Schema, Dataset) {
        let s = parse_domain(domain).unwrap();
        let ds = Dataset::from_text(include_str!("../../fixtures/uwcse.facts"), &s).unwrap();
        (s, ds)
    }

    #[test]
    fn advised_by_is_link_prediction() {
        let (s, ds) = load(include_str!("../../fixtures/uwcse.domain"));
        let job = Job::new(&s, &["advised_by"], &ds.kinds).unwrap();
        assert_eq!(job.targets[0].kind_name(), "link-prediction");
        let (x, y) = infer_partition(&s, &job, &ds.interpretations[0]).unwrap();
        assert_eq!(y.len(), 2);
        assert!(y.iter().all(|a| &*a.predicate == "advised_by"));
        assert_eq!(x.len() + y.len(), ds.interpretations[0].atoms.len());
    }

    #[test]
    fn dependent_intensional_atoms_go_to_output() {
        let domain = format!(
            "{}\nsignature coadvised(a::student, b::student)::intensional.\n\
             coadvised(A,B) :- advised_by(A,P), advised_by(B,P).",
            include_str!("../../fixtures/uwcse.domain").replace("end_domain.", "")
        ) + "\nend_domain.";
        let (s, ds) = load(&domain);
        let job = Job::new(&s, &["advised_by"], &ds.kinds).unwrap();
        let (x, y) = infer_partition(&s, &job, &ds.interpretations[0]).unwrap();
        assert!(y.iter().any(|a| &*a.predicate == "coadvised"));
        assert!(x.iter().all(|a| &*a.predicate != "coadvised"));
    }

    #[test]
    fn kinds_by_arity_and_properties() {
        let (s, ds) = load(include_str!("../../fixtures/uwcse.domain"));
        let hp = Job::new(&s, &["has_position"], &ds.kinds).unwrap();
        assert_eq!(hp.targets[0].kind_name(), "multiclass/regression-on-entities");
        assert_eq!(hp.targets[0].task, TaskKind::Multiclass);
        let n = Job::new(&s, &["n_common_papers"], &ds.kinds).unwrap();
        assert_eq!(n.targets[0].task, TaskKind::Regression);
        assert_eq!(n.targets[0].level, CaseLevel::Link);
        assert!(matches!(
            Job::new(&s, &["nope"], &ds.kinds),
            Err(DatasetError::UnknownTarget(_))
        ));
        assert!(matches!(
            Job::new(&s, &["student"], &ds.kinds),
            Err(DatasetError::UnsupportedTarget(_))
        ));
    }

    #[test]
    fn zero_arity_target() {
        let s = parse_domain("signature mutagenic::extensional.\nsignature atm(id::self)::extensional.").unwrap();
        let ds = Dataset::from_text(
            "interpretation m1.\nmutagenic.\natm(a).\ninterpretation m2.\natm(b).",
            &s,
        )
        .unwrap();
        let job = Job::new(&s, &["mutagenic"], &ds.kinds).unwrap();
        assert_eq!(job.targets[0].kind_name(), "binary-classification-of-interpretations");
        let (_, y1) = infer_partition(&s, &job, &ds.interpretations[0]).unwrap();
        let (_, y2) = infer_partition(&s, &job, &ds.interpretations[1]).unwrap();
        assert_eq!(y1.len(), 1);
        assert!(y2.is_empty());
    }
}
