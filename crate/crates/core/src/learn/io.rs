use std::fmt::Write;

use crate::kernel::KernelConfig;

use super::{Head, LearnError, LinearModel, Task, TrainConfig};

const MAGIC: &str = "relkit-model 1";

/// Independent models, one per task, under their task names.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub models: Vec<(String, LinearModel)>,
}

impl ModelBundle {
    pub fn get(&self, name: &str) -> Option<&LinearModel> {
        self.models.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

/// Text serialization; floats use the shortest representation that reads
/// back to the same value.
pub fn write_bundle(b: &ModelBundle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "models {}", b.models.len());
    for (name, m) in &b.models {
        let _ = writeln!(s, "model {name}");
        match &m.task {
            Task::Binary => s.push_str("task binary\n"),
            Task::Regression => s.push_str("task regression\n"),
            Task::Multiclass(classes) => {
                let _ = writeln!(s, "task multiclass {}", classes.len());
                for c in classes {
                    let _ = writeln!(s, "{c}");
                }
            }
        }
        let _ = writeln!(s, "kernel {}", m.kernel.to_lines().join(" "));
        let t = &m.train;
        let _ = writeln!(
            s,
            "train eta0={:?} lambda={:?} epochs={} seed={} loss={}",
            t.eta0, t.lambda, t.epochs, t.seed, t.loss
        );
        let _ = writeln!(s, "heads {}", m.heads.len());
        for h in &m.heads {
            let _ = writeln!(s, "head {:?} {}", h.bias, h.weights.len());
            for (k, w) in &h.weights {
                let _ = writeln!(s, "{k} {w:?}");
            }
        }
    }
    s.push_str("end\n");
    s
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, LearnError> {
        match self.it.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => Err(self.err("unexpected end of file")),
        }
    }

    fn err(&self, m: &str) -> LearnError {
        LearnError::ModelFormat {
            line: self.line,
            message: m.to_string(),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<&'a str, LearnError> {
        let l = self.next()?;
        match l.strip_prefix(kw) {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => Ok(rest.trim_start()),
            _ => Err(self.err(&format!("expected `{kw}`"))),
        }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T, LearnError> {
        s.parse().map_err(|_| self.err(&format!("bad number `{s}`")))
    }
}

pub fn read_bundle(text: &str) -> Result<ModelBundle, LearnError> {
    let mut l = Lines {
        it: text.lines().enumerate(),
        line: 0,
    };
    if l.next()? != MAGIC {
        return Err(l.err("not a model file or unsupported version"));
    }
    let n: usize = {
        let r = l.keyword("models")?;
        l.num(r)?
    };
    let mut models = Vec::with_capacity(n);
    for _ in 0..n {
        let name = l.keyword("model")?.to_string();
        let task_line = l.keyword("task")?;
        let task = match task_line.split_once(' ') {
            None if task_line == "binary" => Task::Binary,
            None if task_line == "regression" => Task::Regression,
            Some(("multiclass", k)) => {
                let k: usize = l.num(k)?;
                let mut classes = Vec::with_capacity(k);
                for _ in 0..k {
                    classes.push(l.next()?.to_string());
                }
                Task::Multiclass(classes)
            }
            _ => return Err(l.err("unknown task")),
        };
        let mut kernel = KernelConfig::default();
        for kv in l.keyword("kernel")?.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| l.err("expected key=value"))?;
            if !kernel.set(k, v).map_err(|e| l.err(&e))? {
                return Err(l.err(&format!("unknown kernel key `{k}`")));
            }
        }
        let mut train = TrainConfig::default();
        for kv in l.keyword("train")?.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| l.err("expected key=value"))?;
            match k {
                "eta0" => train.eta0 = l.num(v)?,
                "lambda" => train.lambda = l.num(v)?,
                "epochs" => train.epochs = l.num(v)?,
                "seed" => train.seed = l.num(v)?,
                "loss" => train.loss = v.parse().map_err(|e: String| l.err(&e))?,
                _ => return Err(l.err(&format!("unknown train key `{k}`"))),
            }
        }
        let h: usize = {
            let r = l.keyword("heads")?;
            l.num(r)?
        };
        let mut heads = Vec::with_capacity(h);
        for _ in 0..h {
            let r = l.keyword("head")?;
            let (b, c) = r
                .split_once(' ')
                .ok_or_else(|| l.err("expected `head <bias> <count>`"))?;
            let bias: f64 = l.num(b)?;
            let count: usize = l.num(c)?;
            let mut weights = Vec::with_capacity(count);
            for _ in 0..count {
                let w = l.next()?;
                let (k, x) = w.split_once(' ').ok_or_else(|| l.err("expected `<index> <weight>`"))?;
                weights.push((l.num::<u64>(k)?, l.num::<f64>(x)?));
            }
            heads.push(Head { weights, bias });
        }
        models.push((
            name,
            LinearModel {
                task,
                heads,
                kernel,
                train,
            },
        ));
    }
    if l.next()? != "end" {
        return Err(l.err("expected `end`"));
    }
    Ok(ModelBundle { models })
}
