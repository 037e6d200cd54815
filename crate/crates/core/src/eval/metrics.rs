use std::collections::BTreeMap;
use std::fmt;

use super::EvalError;

/// Mann-Whitney estimate with average ranks for ties.
pub fn auroc(scored: &[(f64, bool)]) -> Result<f64, EvalError> {
    let pos = scored.iter().filter(|s| s.1).count();
    let neg = scored.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::DegenerateLabels);
    }
    let mut idx: Vec<usize> = (0..scored.len()).collect();
    idx.sort_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scored[idx[j + 1]].0 == scored[idx[i]].0 {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let avg = (i + j + 2) as f64 / 2.0;
        for &k in &idx[i..=j] {
            if scored[k].1 {
                rank_sum += avg;
            }
        }
        i = j + 1;
    }
    let (p, n) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Area under the precision-recall curve by step integration from the
/// highest score down; tied scores form one step.
pub fn aurpc(scored: &[(f64, bool)]) -> Result<f64, EvalError> {
    let pos = scored.iter().filter(|s| s.1).count();
    if pos == 0 || pos == scored.len() {
        return Err(EvalError::DegenerateLabels);
    }
    let mut idx: Vec<usize> = (0..scored.len()).collect();
    idx.sort_by(|&a, &b| scored[b].0.total_cmp(&scored[a].0));
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scored[idx[j + 1]].0 == scored[idx[i]].0 {
            j += 1;
        }
        for &k in &idx[i..=j] {
            if scored[k].1 {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        let recall = tp as f64 / pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j + 1;
    }
    Ok(area)
}

pub fn accuracy<T: PartialEq>(pred: &[T], truth: &[T]) -> f64 {
    if pred.is_empty() {
        return 0.0;
    }
    pred.iter().zip(truth).filter(|(p, t)| p == t).count() as f64 / pred.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Prf {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf { precision, recall, f1 }
    }
}

/// Counts of (true class, predicted class).
#[derive(Debug, Clone, PartialEq)]
pub struct Contingency {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl Contingency {
    pub fn new(classes: &[String], truth: &[String], pred: &[String]) -> Contingency {
        let pos: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let k = classes.len();
        let mut counts = vec![vec![0; k]; k];
        for (t, p) in truth.iter().zip(pred) {
            if let (Some(&i), Some(&j)) = (pos.get(t.as_str()), pos.get(p.as_str())) {
                counts[i][j] += 1;
            }
        }
        Contingency {
            classes: classes.to_vec(),
            counts,
        }
    }

    fn tp_fp_fn(&self, c: usize) -> (usize, usize, usize) {
        let tp = self.counts[c][c];
        let fp = (0..self.classes.len()).map(|t| self.counts[t][c]).sum::<usize>() - tp;
        let fn_ = self.counts[c].iter().sum::<usize>() - tp;
        (tp, fp, fn_)
    }

    pub fn per_class(&self, c: usize) -> Prf {
        let (tp, fp, fn_) = self.tp_fp_fn(c);
        Prf::from_counts(tp, fp, fn_)
    }

    /// Pools true/false positive counts over all classes.
    pub fn micro(&self) -> Prf {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for c in 0..self.classes.len() {
            let (a, b, d) = self.tp_fp_fn(c);
            tp += a;
            fp += b;
            fn_ += d;
        }
        Prf::from_counts(tp, fp, fn_)
    }

    pub fn accuracy(&self) -> f64 {
        let total: usize = self.counts.iter().flatten().sum();
        if total == 0 {
            return 0.0;
        }
        (0..self.classes.len()).map(|c| self.counts[c][c]).sum::<usize>() as f64 / total as f64
    }
}

impl fmt::Display for Contingency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.classes.iter().map(|c| c.len()).max().unwrap_or(0).max(9);
        write!(f, "{:w$}", "true\\pred")?;
        for c in &self.classes {
            write!(f, " {c:>w$}")?;
        }
        writeln!(f, " {:>9} {:>9} {:>9}", "precision", "recall", "f1")?;
        for (i, c) in self.classes.iter().enumerate() {
            write!(f, "{c:w$}")?;
            for n in &self.counts[i] {
                write!(f, " {n:>w$}")?;
            }
            let p = self.per_class(i);
            writeln!(f, " {:>9.4} {:>9.4} {:>9.4}", p.precision, p.recall, p.f1)?;
        }
        let m = self.micro();
        write!(f, "{:w$}", "micro")?;
        for _ in &self.classes {
            write!(f, " {:>w$}", "")?;
        }
        writeln!(f, " {:>9.4} {:>9.4} {:>9.4}", m.precision, m.recall, m.f1)
    }
}

pub fn rmse(pred: &[f64], truth: &[f64]) -> f64 {
    if pred.is_empty() {
        return 0.0;
    }
    let s: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    (s / pred.len() as f64).sqrt()
}

/// Squared Pearson correlation; 0 when either side is constant.
pub fn scc(pred: &[f64], truth: &[f64]) -> f64 {
    let n = pred.len() as f64;
    if pred.is_empty() {
        return 0.0;
    }
    let mp = pred.iter().sum::<f64>() / n;
    let mt = truth.iter().sum::<f64>() / n;
    let (mut cov, mut vp, mut vt) = (0.0, 0.0, 0.0);
    for (p, t) in pred.iter().zip(truth) {
        cov += (p - mp) * (t - mt);
        vp += (p - mp) * (p - mp);
        vt += (t - mt) * (t - mt);
    }
    if vp == 0.0 || vt == 0.0 {
        if vp == 0.0 && vt == 0.0 && pred == truth {
            return 1.0;
        }
        return 0.0;
    }
    cov * cov / (vp * vt)
}

/// Mean absolute percentage error, skipping zero targets.
pub fn mape(pred: &[f64], truth: &[f64]) -> f64 {
    let terms: Vec<f64> = pred
        .iter()
        .zip(truth)
        .filter(|(_, t)| **t != 0.0)
        .map(|(p, t)| ((t - p) / t).abs())
        .collect();
    if terms.is_empty() {
        return 0.0;
    }
    100.0 * terms.iter().sum::<f64>() / terms.len() as f64
}
