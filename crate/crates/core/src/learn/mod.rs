//! Linear models trained by stochastic gradient descent on sparse features.
//!
//! Step size `eta_t = eta0 / (1 + lambda * eta0 * t)`. The weight vector is
//! stored as `scale * v` so the L2 shrink is O(1) per step; the bias is not
//! regularized. Multiclass tasks train one-vs-rest heads.

mod cases;
mod io;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kernel::{KernelConfig, SparseFeatureVector};

pub use cases::{assemble_cases, assemble_from_sources, task_units, AssembleOptions, Case, CaseSource, TaskUnit};
pub use io::{read_bundle, write_bundle, ModelBundle};

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error("no training instances")]
    EmptyTrainingSet,
    #[error("label `{label}` does not fit a {task} task")]
    LabelTaskMismatch { label: String, task: String },
    #[error("no cases could be built for target `{0}`")]
    NoCases(String),
    #[error("model was trained with a different kernel configuration ({0})")]
    ConfigMismatch(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed model file, line {line}: {message}")]
    ModelFormat { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Dataset(#[from] crate::dataset::DatasetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Loss {
    Hinge,
    Logistic,
    Squared,
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Loss::Hinge => "hinge",
            Loss::Logistic => "logistic",
            Loss::Squared => "squared",
        })
    }
}

impl FromStr for Loss {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hinge" => Ok(Loss::Hinge),
            "logistic" => Ok(Loss::Logistic),
            "squared" => Ok(Loss::Squared),
            _ => Err(format!("unknown loss `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub eta0: f64,
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
    pub loss: Loss,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            eta0: 0.1,
            lambda: 1e-4,
            epochs: 20,
            seed: 1,
            loss: Loss::Hinge,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        if !(self.eta0 > 0.0 && self.eta0.is_finite()) {
            return Err(LearnError::InvalidConfig(format!("eta must be > 0, got {}", self.eta0)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(LearnError::InvalidConfig(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.epochs == 0 {
            return Err(LearnError::InvalidConfig("epochs must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    Binary,
    /// One-vs-rest; class order breaks score ties.
    Multiclass(Vec<String>),
    Regression,
}

impl Task {
    fn name(&self) -> &'static str {
        match self {
            Task::Binary => "binary",
            Task::Multiclass(_) => "multiclass",
            Task::Regression => "regression",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Label {
    Binary(bool),
    Class(String),
    Real(f64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Binary(true) => f.write_str("+1"),
            Label::Binary(false) => f.write_str("-1"),
            Label::Class(c) => f.write_str(c),
            Label::Real(x) => write!(f, "{x:?}"),
        }
    }
}

/// One linear scorer `w . x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Head {
    /// Nonzero weights, ascending by index.
    pub weights: Vec<(u64, f64)>,
    pub bias: f64,
}

impl Head {
    pub fn score(&self, x: &SparseFeatureVector) -> f64 {
        let (a, b) = (&self.weights, x.entries());
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s + self.bias
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub task: Task,
    pub heads: Vec<Head>,
    pub kernel: KernelConfig,
    pub train: TrainConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub label: Label,
}

fn gradient(loss: Loss, y: f64, s: f64) -> f64 {
    match loss {
        Loss::Hinge => {
            if y * s < 1.0 {
                y
            } else {
                0.0
            }
        }
        Loss::Logistic => {
            let m = y * s;
            // y * sigmoid(-m), computed without overflow
            if m > 0.0 {
                let e = (-m).exp();
                y * e / (1.0 + e)
            } else {
                y / (1.0 + m.exp())
            }
        }
        Loss::Squared => y - s,
    }
}

fn sgd(xs: &[&SparseFeatureVector], ys: &[f64], cfg: &TrainConfig, seed: u64) -> Head {
    let mut v: HashMap<u64, f64> = HashMap::new();
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = 0u64;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = xs[i];
            let eta = cfg.eta0 / (1.0 + cfg.lambda * cfg.eta0 * t as f64);
            let s = scale
                * x.entries()
                    .iter()
                    .map(|(k, xk)| v.get(k).copied().unwrap_or(0.0) * xk)
                    .sum::<f64>()
                + bias;
            let g = gradient(cfg.loss, ys[i], s);
            scale *= 1.0 - eta * cfg.lambda;
            if scale < 1e-9 {
                for w in v.values_mut() {
                    *w *= scale;
                }
                scale = 1.0;
            }
            if g != 0.0 {
                for &(k, xk) in x.entries() {
                    *v.entry(k).or_insert(0.0) += eta * g * xk / scale;
                }
                bias += eta * g;
            }
            t += 1;
        }
    }
    let mut weights: Vec<(u64, f64)> = v
        .into_iter()
        .map(|(k, w)| (k, w * scale))
        .filter(|e| e.1 != 0.0)
        .collect();
    weights.sort_unstable_by_key(|e| e.0);
    Head { weights, bias }
}

/// Fit a model. Multiclass labels are checked against the class list.
pub fn train(
    instances: &[(SparseFeatureVector, Label)],
    task: Task,
    kernel: &KernelConfig,
    cfg: &TrainConfig,
) -> Result<LinearModel, LearnError> {
    cfg.validate()?;
    if instances.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    let mismatch = |l: &Label| LearnError::LabelTaskMismatch {
        label: l.to_string(),
        task: task.name().to_string(),
    };
    let xs: Vec<&SparseFeatureVector> = instances.iter().map(|i| &i.0).collect();
    let heads = match &task {
        Task::Binary => {
            let ys = instances
                .iter()
                .map(|(_, l)| match l {
                    Label::Binary(b) => Ok(if *b { 1.0 } else { -1.0 }),
                    other => Err(mismatch(other)),
                })
                .collect::<Result<Vec<f64>, _>>()?;
            vec![sgd(&xs, &ys, cfg, cfg.seed)]
        }
        Task::Regression => {
            if cfg.loss != Loss::Squared {
                return Err(LearnError::InvalidConfig(format!(
                    "regression needs squared loss, got {}",
                    cfg.loss
                )));
            }
            let ys = instances
                .iter()
                .map(|(_, l)| match l {
                    Label::Real(x) => Ok(*x),
                    other => Err(mismatch(other)),
                })
                .collect::<Result<Vec<f64>, _>>()?;
            vec![sgd(&xs, &ys, cfg, cfg.seed)]
        }
        Task::Multiclass(classes) => {
            let idx = instances
                .iter()
                .map(|(_, l)| match l {
                    Label::Class(c) => classes.iter().position(|k| k == c).ok_or_else(|| mismatch(l)),
                    other => Err(mismatch(other)),
                })
                .collect::<Result<Vec<usize>, _>>()?;
            use rayon::prelude::*;
            (0..classes.len())
                .into_par_iter()
                .map(|c| {
                    let ys: Vec<f64> = idx.iter().map(|&i| if i == c { 1.0 } else { -1.0 }).collect();
                    sgd(&xs, &ys, cfg, cfg.seed.wrapping_add(c as u64))
                })
                .collect()
        }
    };
    Ok(LinearModel {
        task,
        heads,
        kernel: kernel.clone(),
        train: cfg.clone(),
    })
}

impl LinearModel {
    pub fn predict(&self, x: &SparseFeatureVector) -> Prediction {
        match &self.task {
            Task::Binary => {
                let score = self.heads[0].score(x);
                Prediction {
                    score,
                    label: Label::Binary(score >= 0.0),
                }
            }
            Task::Regression => {
                let score = self.heads[0].score(x);
                Prediction {
                    score,
                    label: Label::Real(score),
                }
            }
            Task::Multiclass(classes) => {
                let scores: Vec<f64> = self.heads.iter().map(|h| h.score(x)).collect();
                let (best, score) = argmax_first(&scores);
                Prediction {
                    score,
                    label: Label::Class(classes[best].clone()),
                }
            }
        }
    }

    /// Score per class, in class order.
    pub fn class_scores(&self, x: &SparseFeatureVector) -> Vec<f64> {
        self.heads.iter().map(|h| h.score(x)).collect()
    }

    pub fn check_kernel(&self, k: &KernelConfig) -> Result<(), LearnError> {
        if &self.kernel == k {
            Ok(())
        } else {
            Err(LearnError::ConfigMismatch(format!(
                "model: {}; requested: {}",
                self.kernel.to_lines().join(" "),
                k.to_lines().join(" ")
            )))
        }
    }
}

/// Index and value of the first maximum.
pub fn argmax_first(xs: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    (best, xs[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(e: &[(u64, f64)]) -> SparseFeatureVector {
        SparseFeatureVector::from_entries(e.to_vec())
    }

    fn separable() -> Vec<(SparseFeatureVector, Label)> {
        vec![
            (sv(&[(0, 2.0), (1, 1.0)]), Label::Binary(true)),
            (sv(&[(0, 1.5), (1, 2.0)]), Label::Binary(true)),
            (sv(&[(0, 3.0), (1, 0.5)]), Label::Binary(true)),
            (sv(&[(0, -1.0), (1, -1.0)]), Label::Binary(false)),
            (sv(&[(0, -2.0), (1, 0.5)]), Label::Binary(false)),
            (sv(&[(0, -0.5), (1, -2.0)]), Label::Binary(false)),
        ]
    }

    #[test]
    fn separable_hinge() {
        let cfg = TrainConfig {
            epochs: 100,
            ..TrainConfig::default()
        };
        let data = separable();
        let m = train(&data, Task::Binary, &KernelConfig::default(), &cfg).unwrap();
        for (x, y) in &data {
            assert_eq!(&m.predict(x).label, y);
        }
    }

    #[test]
    fn constant_labels() {
        let data: Vec<_> = separable()
            .into_iter()
            .map(|(x, _)| (x, Label::Binary(false)))
            .collect();
        let m = train(&data, Task::Binary, &KernelConfig::default(), &TrainConfig::default()).unwrap();
        for (x, _) in &data {
            assert_eq!(m.predict(x).label, Label::Binary(false));
        }
    }

    #[test]
    fn zero_model_ties_to_positive() {
        let m = LinearModel {
            task: Task::Binary,
            heads: vec![Head {
                weights: vec![],
                bias: 0.0,
            }],
            kernel: KernelConfig::default(),
            train: TrainConfig::default(),
        };
        let p = m.predict(&SparseFeatureVector::new());
        assert_eq!(p.score, 0.0);
        assert_eq!(p.label, Label::Binary(true));
    }

    #[test]
    fn multiclass_tie_break() {
        assert_eq!(argmax_first(&[0.2, 0.9, 0.9]).0, 1);
    }

    #[test]
    fn errors() {
        let k = KernelConfig::default();
        let c = TrainConfig::default();
        assert!(matches!(
            train(&[], Task::Binary, &k, &c),
            Err(LearnError::EmptyTrainingSet)
        ));
        let bad = vec![(SparseFeatureVector::new(), Label::Real(1.0))];
        assert!(matches!(
            train(&bad, Task::Binary, &k, &c),
            Err(LearnError::LabelTaskMismatch { .. })
        ));
        let bad = vec![(SparseFeatureVector::new(), Label::Class("z".into()))];
        assert!(matches!(
            train(&bad, Task::Multiclass(vec!["a".into()]), &k, &c),
            Err(LearnError::LabelTaskMismatch { .. })
        ));
    }

    #[test]
    fn squared_matches_least_squares() {
        // y = 2x + 1 through two points; exact fit exists
        let data = vec![(sv(&[(0, 1.0)]), Label::Real(3.0)), (sv(&[(0, 2.0)]), Label::Real(5.0))];
        let cfg = TrainConfig {
            eta0: 0.05,
            lambda: 0.0,
            epochs: 20000,
            loss: Loss::Squared,
            seed: 3,
        };
        let m = train(&data, Task::Regression, &KernelConfig::default(), &cfg).unwrap();
        assert!((m.heads[0].weights[0].1 - 2.0).abs() < 1e-3);
        assert!((m.heads[0].bias - 1.0).abs() < 1e-3);
    }

    #[test]
    fn deterministic() {
        let data = separable();
        let a = train(&data, Task::Binary, &KernelConfig::default(), &TrainConfig::default()).unwrap();
        let b = train(&data, Task::Binary, &KernelConfig::default(), &TrainConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
