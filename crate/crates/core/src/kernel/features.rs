use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::graph::{Graph, Viewpoint};

use super::hash::Fnv;
use super::pairs::{profile, sparse_dot};
use super::KernelConfig;

/// Sparse vector with strictly increasing indices and no zero entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseFeatureVector {
    entries: Vec<(u64, f64)>,
}

impl SparseFeatureVector {
    pub fn new() -> Self {
        SparseFeatureVector::default()
    }

    /// Build from arbitrary entries; duplicates are summed, zeros dropped.
    pub fn from_entries(mut e: Vec<(u64, f64)>) -> Self {
        e.sort_unstable_by_key(|x| x.0);
        let mut entries: Vec<(u64, f64)> = Vec::with_capacity(e.len());
        for (k, x) in e {
            match entries.last_mut() {
                Some(last) if last.0 == k => last.1 += x,
                _ => entries.push((k, x)),
            }
        }
        entries.retain(|x| x.1 != 0.0);
        SparseFeatureVector { entries }
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: u64) -> f64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn dot(&self, other: &SparseFeatureVector) -> f64 {
        sparse_dot(&self.entries, &other.entries)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        for e in &mut self.entries {
            e.1 *= s;
        }
        self.entries.retain(|x| x.1 != 0.0);
    }

    /// `<label> <index>:<value> ...` with shortest round-trip floats.
    pub fn to_svm_line(&self, label: &str) -> String {
        let mut s = String::from(label);
        for (k, x) in &self.entries {
            let _ = write!(s, " {k}:{x:?}");
        }
        s
    }

    /// Inverse of [`SparseFeatureVector::to_svm_line`].
    pub fn parse_svm_line(line: &str) -> Result<(String, SparseFeatureVector), String> {
        let mut it = line.split_whitespace();
        let label = it.next().ok_or("empty line")?.to_string();
        let mut e = Vec::new();
        for tok in it {
            let (k, x) = tok.split_once(':').ok_or_else(|| format!("bad entry `{tok}`"))?;
            let k: u64 = k.parse().map_err(|_| format!("bad index `{k}`"))?;
            let x: f64 = x.parse().map_err(|_| format!("bad value `{x}`"))?;
            e.push((k, x));
        }
        Ok((label, SparseFeatureVector::from_entries(e)))
    }
}

/// Explicit feature map restricted to pairs whose first root is in `first`.
/// Each `(r, d)` block is scaled to unit norm before the blocks are summed.
pub fn features_with_roots(g: &Graph, cfg: &KernelConfig, first: Option<&[usize]>) -> SparseFeatureVector {
    let mut total: BTreeMap<u64, f64> = BTreeMap::new();
    for (_, items) in profile(g, cfg, first) {
        let mut block: HashMap<u64, f64> = HashMap::new();
        for it in &items {
            for &(k, x) in &it.vec {
                let idx = cfg.fold(Fnv::tagged(b'f').write_u64(it.ctx).write_u64(k).finish());
                *block.entry(idx).or_insert(0.0) += x;
            }
        }
        let mut block: Vec<(u64, f64)> = block.into_iter().collect();
        block.sort_unstable_by_key(|e| e.0);
        let norm = block.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt();
        if norm <= 0.0 {
            continue;
        }
        for (k, x) in block {
            *total.entry(k).or_insert(0.0) += x / norm;
        }
    }
    SparseFeatureVector::from_entries(total.into_iter().collect())
}

pub fn features(g: &Graph, cfg: &KernelConfig) -> SparseFeatureVector {
    features_with_roots(g, cfg, None)
}

/// Features of a mutilated graph seen from its case: first roots in `W_c`.
pub fn features_for_case(vp: &Viewpoint, cfg: &KernelConfig) -> SparseFeatureVector {
    features_with_roots(&vp.graph, cfg, Some(&vp.w))
}
