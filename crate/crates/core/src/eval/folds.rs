use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atom::{AtomSet, Constant};
use crate::dataset::SliceSystem;
use crate::schema::Schema;

use super::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub enum Split {
    /// Train and test interpretation ids.
    Ids { train: Vec<Arc<str>>, test: Vec<Arc<str>> },
    /// Slice indices within one interpretation; `test` follows `train`.
    Slices {
        train: Vec<usize>,
        test: usize,
        test_key: Constant,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fold {
    pub repetition: usize,
    pub index: usize,
    pub split: Split,
}

impl Fold {
    pub fn name(&self) -> String {
        match &self.split {
            Split::Slices { test_key, .. } => test_key.to_string(),
            Split::Ids { .. } => format!("{}.{}", self.repetition, self.index),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldPlan {
    pub folds: Vec<Fold>,
    /// Interpretation id and slice system of a slice-forward plan.
    pub sliced: Option<(Arc<str>, SliceSystem)>,
}

impl FoldPlan {
    /// `k` folds over shuffled ids, repeated with fresh shuffles.
    pub fn k_fold(ids: &[Arc<str>], k: usize, repetitions: usize, seed: u64) -> Result<FoldPlan, EvalError> {
        if k < 2 || k > ids.len() {
            return Err(EvalError::InvalidPlan(format!(
                "k-fold needs 2 <= k <= {} interpretations, got k = {k}",
                ids.len()
            )));
        }
        let mut folds = Vec::new();
        for rep in 0..repetitions.max(1) {
            let mut order = ids.to_vec();
            order.sort();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(rep as u64)));
            for f in 0..k {
                let mut train = Vec::new();
                let mut test = Vec::new();
                for (i, id) in order.iter().enumerate() {
                    if i % k == f {
                        test.push(id.clone());
                    } else {
                        train.push(id.clone());
                    }
                }
                folds.push(Fold {
                    repetition: rep,
                    index: f,
                    split: Split::Ids { train, test },
                });
            }
        }
        Ok(FoldPlan { folds, sliced: None })
    }

    /// Each interpretation is the test set once.
    pub fn leave_one_out(ids: &[Arc<str>]) -> Result<FoldPlan, EvalError> {
        if ids.len() < 2 {
            return Err(EvalError::InvalidPlan(
                "leave-one-out needs at least 2 interpretations".into(),
            ));
        }
        let folds = ids
            .iter()
            .enumerate()
            .map(|(i, id)| Fold {
                repetition: 0,
                index: i,
                split: Split::Ids {
                    train: ids.iter().filter(|o| *o != id).cloned().collect(),
                    test: vec![id.clone()],
                },
            })
            .collect();
        Ok(FoldPlan { folds, sliced: None })
    }

    /// Test on every slice `t` preceded by `width` slices; train on those.
    pub fn slice_forward(interpretation: &str, slices: &SliceSystem, width: usize) -> Result<FoldPlan, EvalError> {
        if width < 2 {
            return Err(EvalError::InvalidPlan("slice frames need at least 2 slices".into()));
        }
        if slices.len() <= width {
            return Err(EvalError::InvalidPlan(format!(
                "{} slices leave no test slice after a frame of {width}",
                slices.len()
            )));
        }
        let folds = (width..slices.len())
            .enumerate()
            .map(|(i, t)| Fold {
                repetition: 0,
                index: i,
                split: Split::Slices {
                    train: (t - width..t).collect(),
                    test: t,
                    test_key: slices.keys[t].clone(),
                },
            })
            .collect();
        Ok(FoldPlan {
            folds,
            sliced: Some((Arc::from(interpretation), slices.clone())),
        })
    }
}

/// Add the entity atoms of `all` that atoms in `atoms` refer to.
pub fn close_entities(schema: &Schema, all: &AtomSet, atoms: &mut AtomSet) {
    let mut wanted = std::collections::BTreeSet::new();
    for a in atoms.iter() {
        let Some(sig) = schema.signature(&a.predicate) else {
            continue;
        };
        for (c, _) in sig.identifier_columns() {
            wanted.insert((sig.entity_set_of(c).expect("identifier").clone(), a.args[c].clone()));
        }
    }
    for a in all {
        let Some(sig) = schema.signature(&a.predicate) else {
            continue;
        };
        if !sig.is_entity() {
            continue;
        }
        if let Some((c, _)) = sig.identifier_columns().next() {
            if wanted.contains(&(sig.name.clone(), a.args[c].clone())) {
                atoms.insert(a.clone());
            }
        }
    }
}

/// Input and output of the frame `frame` when predicting slice `t`:
/// inputs of frame slices up to `t`, outputs of frame slices before `t`,
/// and the outputs of `t` as targets.
pub fn frame_view(slices: &SliceSystem, x: &AtomSet, y: &AtomSet, frame: &[usize], t: usize) -> (AtomSet, AtomSet) {
    let mut input = AtomSet::new();
    let mut output = AtomSet::new();
    for (a, &i) in &slices.assignment {
        if !frame.contains(&i) {
            continue;
        }
        if x.contains(a) && i <= t {
            input.insert(a.clone());
        } else if y.contains(a) {
            if i < t {
                input.insert(a.clone());
            } else if i == t {
                output.insert(a.clone());
            }
        }
    }
    (input, output)
}
