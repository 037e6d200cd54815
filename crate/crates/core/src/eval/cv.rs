use std::collections::BTreeSet;
use std::fmt::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::dataset::{infer_partition, Dataset, Job};
use crate::kernel::KernelConfig;
use crate::learn::{
    assemble_cases, assemble_from_sources, task_units, train, AssembleOptions, Case, CaseSource, Label, Task, TaskUnit,
    TrainConfig,
};
use crate::schema::Schema;

use super::folds::{close_entities, frame_view, FoldPlan, Split};
use super::metrics::{accuracy, auroc, aurpc, mape, rmse, scc, Contingency, Prf};
use super::EvalError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CvOptions {
    pub assemble: AssembleOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub name: String,
    pub n_train: usize,
    pub n_test: usize,
    pub metrics: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub fold: String,
    pub case: String,
    pub score: f64,
    pub predicted: Label,
    pub truth: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskReport {
    pub task: String,
    pub kind: String,
    pub folds: Vec<FoldResult>,
    /// Metrics over all test predictions pooled.
    pub pooled: Vec<(String, f64)>,
    /// Mean and sample standard deviation over folds.
    pub summary: Vec<(String, f64, f64)>,
    pub contingency: Option<Contingency>,
    pub predictions: Vec<PredictionRow>,
}

impl TaskReport {
    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.summary.iter().find(|m| m.0 == metric).map(|m| m.1)
    }

    pub fn pooled(&self, metric: &str) -> Option<f64> {
        self.pooled.iter().find(|m| m.0 == metric).map(|m| m.1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tasks: Vec<TaskReport>,
}

fn metrics_for(task: &Task, rows: &[PredictionRow]) -> (Vec<(String, f64)>, Option<Contingency>) {
    let mut out = Vec::new();
    match task {
        Task::Binary => {
            let scored: Vec<(f64, bool)> = rows.iter().map(|r| (r.score, r.truth == Label::Binary(true))).collect();
            if let Ok(v) = auroc(&scored) {
                out.push(("auroc".into(), v));
            }
            if let Ok(v) = aurpc(&scored) {
                out.push(("aurpc".into(), v));
            }
            let pred: Vec<&Label> = rows.iter().map(|r| &r.predicted).collect();
            let truth: Vec<&Label> = rows.iter().map(|r| &r.truth).collect();
            out.push(("accuracy".into(), accuracy(&pred, &truth)));
            let count = |p: bool, t: bool| {
                rows.iter()
                    .filter(|r| (r.predicted == Label::Binary(true)) == p && (r.truth == Label::Binary(true)) == t)
                    .count()
            };
            let prf = Prf::from_counts(count(true, true), count(true, false), count(false, true));
            out.push(("precision".into(), prf.precision));
            out.push(("recall".into(), prf.recall));
            out.push(("f1".into(), prf.f1));
            (out, None)
        }
        Task::Multiclass(classes) => {
            let truth: Vec<String> = rows.iter().map(|r| r.truth.to_string()).collect();
            let pred: Vec<String> = rows.iter().map(|r| r.predicted.to_string()).collect();
            let table = Contingency::new(classes, &truth, &pred);
            let m = table.micro();
            out.push(("accuracy".into(), table.accuracy()));
            out.push(("precision".into(), m.precision));
            out.push(("recall".into(), m.recall));
            out.push(("f1".into(), m.f1));
            (out, Some(table))
        }
        Task::Regression => {
            let real = |l: &Label| match l {
                Label::Real(x) => *x,
                _ => f64::NAN,
            };
            let pred: Vec<f64> = rows.iter().map(|r| r.score).collect();
            let truth: Vec<f64> = rows.iter().map(|r| real(&r.truth)).collect();
            out.push(("rmse".into(), rmse(&pred, &truth)));
            out.push(("scc".into(), scc(&pred, &truth)));
            out.push(("mape".into(), mape(&pred, &truth)));
            (out, None)
        }
    }
}

fn summarize(folds: &[FoldResult]) -> Vec<(String, f64, f64)> {
    let mut names: Vec<String> = Vec::new();
    for f in folds {
        for (n, _) in &f.metrics {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    names
        .into_iter()
        .map(|n| {
            let vals: Vec<f64> = folds
                .iter()
                .filter_map(|f| f.metrics.iter().find(|m| m.0 == n).map(|m| m.1))
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let std = if vals.len() > 1 {
                (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (vals.len() - 1) as f64).sqrt()
            } else {
                0.0
            };
            (n, mean, std)
        })
        .collect()
}

fn fit_and_score(
    unit: &TaskUnit,
    fold: &str,
    train_cases: &[&Case],
    test_cases: &[&Case],
    kcfg: &KernelConfig,
    tcfg: &TrainConfig,
) -> Result<(FoldResult, Vec<PredictionRow>), EvalError> {
    let data: Vec<_> = train_cases
        .iter()
        .map(|c| (c.features.clone(), c.label.clone()))
        .collect();
    let model = train(&data, unit.task.clone(), kcfg, tcfg)?;
    let rows: Vec<PredictionRow> = test_cases
        .iter()
        .map(|c| {
            let p = model.predict(&c.features);
            PredictionRow {
                fold: fold.to_string(),
                case: c.id.clone(),
                score: p.score,
                predicted: p.label,
                truth: c.label.clone(),
            }
        })
        .collect();
    let (metrics, _) = metrics_for(&unit.task, &rows);
    Ok((
        FoldResult {
            name: fold.to_string(),
            n_train: train_cases.len(),
            n_test: test_cases.len(),
            metrics,
        },
        rows,
    ))
}

/// Cross-validate every task of `job` under `plan`.
pub fn run_cv(
    schema: &Schema,
    data: &Dataset,
    job: &Job,
    kcfg: &KernelConfig,
    tcfg: &TrainConfig,
    plan: &FoldPlan,
    opts: &CvOptions,
) -> Result<Report, EvalError> {
    tcfg.validate()?;
    let units = task_units(schema, job, &data.kinds, &data.interpretations);
    let mut tasks = Vec::new();
    for unit in &units {
        let results: Vec<Result<(FoldResult, Vec<PredictionRow>), EvalError>> = match &plan.sliced {
            None => {
                let cases = assemble_cases(
                    schema,
                    job,
                    unit,
                    &data.interpretations,
                    &data.kinds,
                    kcfg,
                    &opts.assemble,
                )?;
                plan.folds
                    .par_iter()
                    .map(|f| {
                        let Split::Ids { train, test } = &f.split else {
                            return Err(EvalError::InvalidPlan("slice fold without a slice system".into()));
                        };
                        let train: BTreeSet<&Arc<str>> = train.iter().collect();
                        let test: BTreeSet<&Arc<str>> = test.iter().collect();
                        let tr: Vec<&Case> = cases.iter().filter(|c| train.contains(&c.interpretation)).collect();
                        let te: Vec<&Case> = cases.iter().filter(|c| test.contains(&c.interpretation)).collect();
                        fit_and_score(unit, &f.name(), &tr, &te, kcfg, tcfg)
                    })
                    .collect()
            }
            Some((id, slices)) => {
                let interp = data
                    .get(id)
                    .ok_or_else(|| EvalError::InvalidPlan(format!("no interpretation `{id}`")))?;
                let (x, y) = infer_partition(schema, job, interp)?;
                let source = |frame: &[usize], t: usize, tag: String| {
                    let (mut input, output) = frame_view(slices, &x, &y, frame, t);
                    let mut refs = input.clone();
                    refs.extend(output.iter().cloned());
                    close_entities(schema, &interp.atoms, &mut refs);
                    input.extend(refs.into_iter().filter(|a| !output.contains(a)));
                    CaseSource {
                        id: Arc::from(tag.as_str()),
                        x: input,
                        y: output,
                    }
                };
                plan.folds
                    .par_iter()
                    .map(|f| {
                        let Split::Slices { train, test, .. } = &f.split else {
                            return Err(EvalError::InvalidPlan("id fold in a slice plan".into()));
                        };
                        let train_src: Vec<CaseSource> = train[1..]
                            .iter()
                            .map(|&t| source(train, t, format!("{id}@{}", slices.keys[t])))
                            .collect();
                        let test_src = vec![source(&[*test], *test, format!("{id}@{}", slices.keys[*test]))];
                        let tr = assemble_from_sources(schema, unit, &train_src, &data.kinds, kcfg, &opts.assemble)?;
                        let te = assemble_from_sources(schema, unit, &test_src, &data.kinds, kcfg, &opts.assemble)?;
                        let tr: Vec<&Case> = tr.iter().collect();
                        let te: Vec<&Case> = te.iter().collect();
                        fit_and_score(unit, &f.name(), &tr, &te, kcfg, tcfg)
                    })
                    .collect()
            }
        };
        let mut folds = Vec::new();
        let mut predictions = Vec::new();
        for r in results {
            let (f, rows) = r?;
            folds.push(f);
            predictions.extend(rows);
        }
        let (pooled, contingency) = metrics_for(&unit.task, &predictions);
        tasks.push(TaskReport {
            task: unit.name.clone(),
            kind: match &unit.task {
                Task::Binary => "binary".into(),
                Task::Multiclass(_) => "multiclass".into(),
                Task::Regression => "regression".into(),
            },
            summary: summarize(&folds),
            folds,
            pooled,
            contingency,
            predictions,
        });
    }
    Ok(Report { tasks })
}

impl Report {
    pub fn task(&self, name: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.task == name)
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.tasks {
            let _ = writeln!(s, "task {} ({})", t.task, t.kind);
            for f in &t.folds {
                let _ = write!(s, "  fold {:>8}  train {:>6}  test {:>6} ", f.name, f.n_train, f.n_test);
                for (m, v) in &f.metrics {
                    let _ = write!(s, " {m}={v:.4}");
                }
                s.push('\n');
            }
            for (m, mean, std) in &t.summary {
                let _ = writeln!(s, "  {m:<10} {mean:.4} +- {std:.4}");
            }
            s.push_str("  pooled:");
            for (m, v) in &t.pooled {
                let _ = write!(s, " {m}={v:.4}");
            }
            s.push('\n');
            if let Some(c) = &t.contingency {
                for line in c.to_string().lines() {
                    let _ = writeln!(s, "  {line}");
                }
            }
        }
        s
    }

    /// `fold metric value` lines; folds named `<task>:<fold>`, plus
    /// `<task>:pooled`, `<task>:mean` and `<task>:std`.
    pub fn to_machine(&self) -> String {
        let mut s = String::new();
        for t in &self.tasks {
            for f in &t.folds {
                for (m, v) in &f.metrics {
                    let _ = writeln!(s, "{}:{} {m} {v:?}", t.task, f.name);
                }
            }
            for (m, v) in &t.pooled {
                let _ = writeln!(s, "{}:pooled {m} {v:?}", t.task);
            }
            for (m, mean, std) in &t.summary {
                let _ = writeln!(s, "{}:mean {m} {mean:?}", t.task);
                let _ = writeln!(s, "{}:std {m} {std:?}", t.task);
            }
        }
        s
    }

    /// One `case_id score label` line per test prediction.
    pub fn predictions_text(&self) -> String {
        let mut s = String::new();
        for t in &self.tasks {
            for p in &t.predictions {
                let _ = writeln!(s, "{} {:?} {}", p.case, p.score, p.predicted);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_domain;

    #[test]
    fn uwcse_leave_one_out_runs() {
        let s = parse_domain(include_str!("../../fixtures/uwcse.domain")).unwrap();
        let text = format!(
            "{}\n{}",
            include_str!("../../fixtures/uwcse.facts"),
            include_str!("../../fixtures/uwcse.facts").replace("interpretation ai.", "interpretation ai2.")
        );
        let ds = Dataset::from_text(&text, &s).unwrap();
        let job = Job::new(&s, &["advised_by"], &ds.kinds).unwrap();
        let ids: Vec<Arc<str>> = ds.interpretations.iter().map(|i| i.id.clone()).collect();
        let plan = FoldPlan::leave_one_out(&ids).unwrap();
        let r = run_cv(
            &s,
            &ds,
            &job,
            &KernelConfig::default(),
            &TrainConfig::default(),
            &plan,
            &CvOptions::default(),
        )
        .unwrap();
        assert_eq!(r.tasks[0].folds.len(), 2);
        assert_eq!(r.tasks[0].predictions.len(), 16);
        assert!(r.to_machine().contains("advised_by:0.0 auroc"));
        assert!(r.to_text().contains("task advised_by (binary)"));
    }

    #[test]
    fn slice_forward_runs() {
        let s = parse_domain(
            "signature movie(id::self, year::property, genre::property)::extensional.\n\
             signature actor(id::self)::extensional.\n\
             signature acted_in(a::actor, m::movie)::extensional.\n\
             signature blockbuster(m::movie)::extensional.",
        )
        .unwrap();
        let mut facts = String::from("interpretation imdb.\n");
        for y in 0..6 {
            for m in 0..4 {
                let id = format!("m{y}_{m}");
                let genre = if m % 2 == 0 { "action" } else { "drama" };
                let _ = writeln!(facts, "movie({id},{},{genre}).", 2000 + y);
                let _ = writeln!(facts, "acted_in(a{m},{id}).");
                if m % 2 == 0 {
                    let _ = writeln!(facts, "blockbuster({id}).");
                }
            }
        }
        for m in 0..4 {
            let _ = writeln!(facts, "actor(a{m}).");
        }
        let ds = Dataset::from_text(&facts, &s).unwrap();
        let slices = crate::dataset::build_slices(&ds.interpretations[0], &s, "movie", "year").unwrap();
        let plan = FoldPlan::slice_forward("imdb", &slices, 2).unwrap();
        let job = Job::new(&s, &["blockbuster"], &ds.kinds).unwrap();
        let r = run_cv(
            &s,
            &ds,
            &job,
            &KernelConfig::default(),
            &TrainConfig::default(),
            &plan,
            &CvOptions::default(),
        )
        .unwrap();
        let t = &r.tasks[0];
        assert_eq!(t.folds.len(), 4);
        // training: 4 movies of t-1 plus the 2 known non-blockbusters of t-2
        assert!(t.folds.iter().all(|f| f.n_test == 4 && f.n_train == 6));
        // exactly the action movies are blockbusters
        assert_eq!(t.pooled("auroc"), Some(1.0));
    }
}
