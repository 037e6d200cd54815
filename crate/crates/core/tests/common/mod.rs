//! Test-only oracles, written independently of the library internals.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relkit_core::graph::{Graph, Vertex};
use relkit_core::{Atom, AtomSet, Constant};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph with `1..=max_n` vertices, labels drawn from
/// `labels` and roles from `roles`.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, labels: &[&str], roles: &[&str], p: f64) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let mut g = Graph::new();
    for _ in 0..n {
        g.add_vertex(Vertex::plain(labels.choose(rng).unwrap()));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v, roles.choose(rng).unwrap());
            }
        }
    }
    g
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// All-pairs shortest path lengths; `usize::MAX` when unreachable.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if d[w] == usize::MAX {
                        d[w] = d[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Induced ball of radius `r` around `root`, as a small standalone graph
/// with the root at index 0: labels and an edge-role multiset map.
#[derive(Debug, Clone)]
pub struct Ball {
    pub labels: Vec<String>,
    pub edges: BTreeMap<(usize, usize), Vec<String>>,
}

pub fn ball(g: &Graph, dist: &[Vec<usize>], root: usize, r: usize) -> Ball {
    let mut members = vec![root];
    members.extend((0..g.len()).filter(|&v| v != root && dist[root][v] <= r));
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for e in g.edges() {
        if let (Some(&a), Some(&b)) = (pos.get(&e.u), pos.get(&e.v)) {
            edges.entry((a.min(b), a.max(b))).or_default().push(e.role.to_string());
        }
    }
    for roles in edges.values_mut() {
        roles.sort();
    }
    Ball {
        labels: members.iter().map(|&v| g.vertex(v).label.to_string()).collect(),
        edges,
    }
}

/// Brute-force rooted isomorphism preserving labels and edge roles.
pub fn isomorphic(a: &Ball, b: &Ball) -> bool {
    let n = a.labels.len();
    if n != b.labels.len() || a.edges.len() != b.edges.len() || a.labels[0] != b.labels[0] {
        return false;
    }
    let mut la = a.labels.clone();
    let mut lb = b.labels.clone();
    la.sort();
    lb.sort();
    if la != lb {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    extend(a, b, &mut map, &mut used, 1)
}

fn extend(a: &Ball, b: &Ball, map: &mut [usize], used: &mut [bool], i: usize) -> bool {
    let n = map.len();
    if i == n {
        return true;
    }
    for j in 0..n {
        if used[j] || a.labels[i] != b.labels[j] {
            continue;
        }
        let consistent = (0..i).all(|k| {
            let ea = a.edges.get(&(k.min(i), k.max(i)));
            let eb = b.edges.get(&(map[k].min(j), map[k].max(j)));
            ea == eb
        });
        if consistent {
            map[i] = j;
            used[j] = true;
            if extend(a, b, map, used, i + 1) {
                return true;
            }
            used[j] = false;
        }
    }
    map[i] = usize::MAX;
    false
}

/// Label histogram of a ball.
pub fn histogram(b: &Ball) -> BTreeMap<String, f64> {
    let mut h = BTreeMap::new();
    for l in &b.labels {
        *h.entry(l.clone()).or_insert(0.0) += 1.0;
    }
    h
}

pub fn hist_dot(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    a.iter().map(|(k, x)| x * b.get(k).copied().unwrap_or(0.0)).sum()
}

pub fn hist_sum(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(0.0) += v;
    }
    out
}

/// Ordered root pairs `(u, v)` at exactly distance `d`.
pub fn root_pairs(dist: &[Vec<usize>], d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (u, row) in dist.iter().enumerate() {
        for (v, &duv) in row.iter().enumerate() {
            if duv == d {
                out.push((u, v));
            }
        }
    }
    out
}

/// Soft-match block kernel by explicit double summation over root pairs.
pub fn soft_kappa(g: &Graph, h: &Graph, r: usize, d: usize) -> f64 {
    let (dg, dh) = (distances(g), distances(h));
    let mut s = 0.0;
    for (u, v) in root_pairs(&dg, d) {
        let a = hist_sum(&histogram(&ball(g, &dg, u, r)), &histogram(&ball(g, &dg, v, r)));
        for (x, y) in root_pairs(&dh, d) {
            if g.vertex(u).label != h.vertex(x).label || g.vertex(v).label != h.vertex(y).label {
                continue;
            }
            let b = hist_sum(&histogram(&ball(h, &dh, x, r)), &histogram(&ball(h, &dh, y, r)));
            s += hist_dot(&a, &b);
        }
    }
    s
}

/// Naive fixpoint iteration of the UW-CSE background rules.
pub fn naive_uwcse(facts: &AtomSet) -> AtomSet {
    let of = |set: &AtomSet, p: &str| -> Vec<Vec<Constant>> {
        set.iter()
            .filter(|a| &*a.predicate == p)
            .map(|a| a.args.clone())
            .collect()
    };
    let mut all = facts.clone();
    loop {
        let mut next = all.clone();
        let students = of(&all, "student");
        let profs = of(&all, "professor");
        let ta = of(&all, "ta");
        let taught = of(&all, "taught_by");
        let publ = of(&all, "publication");
        for s in &students {
            for p in &profs {
                let (s, p) = (&s[0], &p[0]);
                if ta.iter().any(|t| {
                    taught
                        .iter()
                        .any(|u| t[0] == u[0] && &t[1] == s && &u[1] == p && t[2] == u[2])
                }) {
                    next.insert(Atom::new("on_same_course", vec![s.clone(), p.clone()]));
                }
                let common: BTreeSet<&Constant> = publ
                    .iter()
                    .filter(|x| &x[1] == s)
                    .filter(|x| publ.iter().any(|y| y[0] == x[0] && &y[1] == p))
                    .map(|x| &x[0])
                    .collect();
                if !common.is_empty() {
                    next.insert(Atom::new("on_same_paper", vec![s.clone(), p.clone()]));
                    next.insert(Atom::new(
                        "n_common_papers",
                        vec![s.clone(), p.clone(), Constant::num(common.len() as f64)],
                    ));
                }
            }
        }
        if next == all {
            break;
        }
        all = next;
    }
    all.retain(|a| !facts.contains(a));
    all
}

/// Brute-force AUROC: fraction of positive/negative pairs ranked correctly,
/// ties counting one half.
pub fn brute_auroc(scored: &[(f64, bool)]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(a, pa) in scored {
        for &(b, pb) in scored {
            if pa && !pb {
                den += 1.0;
                num += if a > b {
                    1.0
                } else if a == b {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    num / den
}
