use std::collections::{BTreeMap, HashMap};

use crate::graph::Graph;

use super::encoding::{hash_codes, label_hashes};
use super::hash::Fnv;
use super::neighborhood::{bfs, neighborhood_from};
use super::tuple::{hard_vertex_features, soft_vertex_features};
use super::{KernelConfig, MatchKind, TupleMode};

/// Ordered root pair `(u, v)` at distance `d`, compared through
/// neighborhoods of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootPair {
    pub u: usize,
    pub v: usize,
    pub r: usize,
    pub d: usize,
}

fn allowed(g: &Graph, cfg: &KernelConfig, v: usize) -> bool {
    !cfg.use_kernel_points || g.vertex(v).kernel_point
}

/// All ordered root pairs with `r <= r*` and `d <= d*`. When `first` is
/// given the first root must belong to it.
pub fn kernel_pairs(g: &Graph, cfg: &KernelConfig, first: Option<&[usize]>) -> Vec<RootPair> {
    let mut out = Vec::new();
    let roots: Vec<usize> = match first {
        Some(w) => w.iter().copied().filter(|&u| u < g.len()).collect(),
        None => (0..g.len()).collect(),
    };
    for u in roots {
        if !allowed(g, cfg, u) {
            continue;
        }
        let mut reach = bfs(g, u, cfg.max_distance);
        reach.sort_unstable_by_key(|&(v, d)| (d, v));
        for (v, d) in reach {
            if !allowed(g, cfg, v) {
                continue;
            }
            for r in 0..=cfg.max_radius {
                out.push(RootPair { u, v, r, d: d as usize });
            }
        }
    }
    out
}

/// One root pair reduced to a matching context and a sparse vector; two
/// items contribute `[ctx == ctx'] * <vec, vec'>` to their block.
#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub ctx: u64,
    pub vec: Vec<(u64, f64)>,
}

struct NbData {
    id: u64,
    vec: Vec<(u64, f64)>,
}

fn aggregate(mut v: Vec<(u64, f64)>) -> Vec<(u64, f64)> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u64, f64)> = Vec::with_capacity(v.len());
    for (k, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += x,
            _ => out.push((k, x)),
        }
    }
    out
}

fn merge(a: &[(u64, f64)], b: &[(u64, f64)]) -> Vec<(u64, f64)> {
    aggregate(a.iter().chain(b).copied().collect())
}

pub(crate) fn sparse_dot(a: &[(u64, f64)], b: &[(u64, f64)]) -> f64 {
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
    s
}

struct Prep<'g> {
    g: &'g Graph,
    cfg: &'g KernelConfig,
    label_h: Vec<u64>,
    bfs: HashMap<usize, Vec<(usize, u32)>>,
    nb: HashMap<(usize, usize), NbData>,
}

impl<'g> Prep<'g> {
    fn new(g: &'g Graph, cfg: &'g KernelConfig) -> Self {
        Prep {
            g,
            cfg,
            label_h: label_hashes(g),
            bfs: HashMap::new(),
            nb: HashMap::new(),
        }
    }

    fn hard_discrete(&self) -> bool {
        self.cfg.match_kind == MatchKind::Hard && self.cfg.tuple_mode == TupleMode::Discrete
    }

    fn data(&mut self, v: usize, r: usize) -> &NbData {
        if !self.nb.contains_key(&(v, r)) {
            let g = self.g;
            let limit = self.cfg.max_radius;
            let dists = self.bfs.entry(v).or_insert_with(|| bfs(g, v, limit));
            let n = neighborhood_from(g, v, r, dists);
            let (id, codes) = hash_codes(g, &n.vertices, &n.edges, Some(&n.root_dist), &self.label_h);
            let mut raw = Vec::new();
            match (self.cfg.match_kind, self.cfg.tuple_mode) {
                (MatchKind::Hard, TupleMode::Discrete) => {}
                (MatchKind::Soft, mode) => {
                    for &m in &n.vertices {
                        soft_vertex_features(g.vertex(m), mode, &mut raw);
                    }
                }
                (MatchKind::Hard, mode) => {
                    for (&m, &code) in n.vertices.iter().zip(&codes) {
                        hard_vertex_features(g.vertex(m), code, mode, &mut raw);
                    }
                }
            }
            self.nb.insert(
                (v, r),
                NbData {
                    id,
                    vec: aggregate(raw),
                },
            );
        }
        &self.nb[&(v, r)]
    }

    fn item(&mut self, p: RootPair) -> Item {
        let (lu, lv) = (self.label_h[p.u], self.label_h[p.v]);
        let tag = match (self.cfg.match_kind, self.hard_discrete()) {
            (_, true) => b'H',
            (MatchKind::Soft, _) => b'S',
            (MatchKind::Hard, _) => b'T',
        };
        let mut h = Fnv::tagged(tag);
        h.write_u32(p.r as u32)
            .write_u32(p.d as u32)
            .write_u64(lu)
            .write_u64(lv);
        if self.hard_discrete() {
            let a = self.data(p.u, p.r).id;
            let b = self.data(p.v, p.r).id;
            h.write_u64(a).write_u64(b);
            return Item {
                ctx: h.finish(),
                vec: vec![(0, 1.0)],
            };
        }
        let a = self.data(p.u, p.r).vec.clone();
        let vec = merge(&a, &self.data(p.v, p.r).vec);
        Item { ctx: h.finish(), vec }
    }
}

/// Items of every root pair, grouped by `(r, d)` block.
pub(crate) fn profile(g: &Graph, cfg: &KernelConfig, first: Option<&[usize]>) -> BTreeMap<(usize, usize), Vec<Item>> {
    let mut prep = Prep::new(g, cfg);
    let mut out: BTreeMap<(usize, usize), Vec<Item>> = BTreeMap::new();
    for p in kernel_pairs(g, cfg, first) {
        let it = prep.item(p);
        out.entry((p.r, p.d)).or_default().push(it);
    }
    out
}

fn block_value(a: &[Item], b: &[Item]) -> f64 {
    let mut s = 0.0;
    for x in a {
        for y in b {
            if x.ctx == y.ctx {
                s += sparse_dot(&x.vec, &y.vec);
            }
        }
    }
    s
}

/// Unnormalized `kappa_{r,d}` by double summation over root pairs, using
/// the match kind and tuple mode of `cfg`.
pub fn kappa_rd(g: &Graph, h: &Graph, r: usize, d: usize, cfg: &KernelConfig) -> f64 {
    let mut c = cfg.clone();
    c.max_radius = c.max_radius.max(r);
    c.max_distance = c.max_distance.max(d);
    let pg = profile(g, &c, None);
    let ph = profile(h, &c, None);
    match (pg.get(&(r, d)), ph.get(&(r, d))) {
        (Some(a), Some(b)) => block_value(a, b),
        _ => 0.0,
    }
}

pub fn kappa_rd_hard(g: &Graph, h: &Graph, r: usize, d: usize, cfg: &KernelConfig) -> f64 {
    let c = KernelConfig {
        match_kind: MatchKind::Hard,
        ..cfg.clone()
    };
    kappa_rd(g, h, r, d, &c)
}

pub fn kappa_rd_soft(g: &Graph, h: &Graph, r: usize, d: usize, cfg: &KernelConfig) -> f64 {
    let c = KernelConfig {
        match_kind: MatchKind::Soft,
        ..cfg.clone()
    };
    kappa_rd(g, h, r, d, &c)
}

/// `k / sqrt(kg * kh)`, or 0 when either self-kernel is 0.
pub fn normalize_rd(k: f64, kg: f64, kh: f64) -> f64 {
    if kg <= 0.0 || kh <= 0.0 {
        0.0
    } else {
        k / (kg * kh).sqrt()
    }
}

/// Sum over `r <= r*`, `d <= d*` of the normalized block kernels.
pub fn kernel(g: &Graph, h: &Graph, cfg: &KernelConfig) -> f64 {
    let pg = profile(g, cfg, None);
    let ph = profile(h, cfg, None);
    let mut total = 0.0;
    for (key, a) in &pg {
        let Some(b) = ph.get(key) else { continue };
        total += normalize_rd(block_value(a, b), block_value(a, a), block_value(b, b));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn path(labels: &[&str]) -> Graph {
        let mut g = Graph::new();
        for l in labels {
            g.add_vertex(Vertex::plain(l));
        }
        for i in 1..labels.len() {
            g.add_edge(i - 1, i, "x");
        }
        g
    }

    fn cfg(r: usize, d: usize) -> KernelConfig {
        KernelConfig::new(r, d, MatchKind::Hard)
    }

    #[test]
    fn single_vertex_pairs() {
        let g = path(&["a"]);
        assert_eq!(
            kernel_pairs(&g, &cfg(0, 0), None),
            [RootPair { u: 0, v: 0, r: 0, d: 0 }]
        );
    }

    #[test]
    fn path_pairs() {
        let g = path(&["a", "b", "c"]);
        let p = kernel_pairs(&g, &cfg(0, 1), None);
        assert_eq!(p.iter().filter(|p| p.d == 0).count(), 3);
        assert_eq!(p.iter().filter(|p| p.d == 1).count(), 4);
    }

    #[test]
    fn kernel_point_filter() {
        let mut g = path(&["a", "b", "c"]);
        g.vertex_mut(0).kernel_point = true;
        let mut c = cfg(0, 1);
        c.use_kernel_points = true;
        assert_eq!(kernel_pairs(&g, &c, None), [RootPair { u: 0, v: 0, r: 0, d: 0 }]);
    }

    #[test]
    fn hard_counts() {
        let g = path(&["a", "b", "a"]);
        assert_eq!(kappa_rd_hard(&g, &g, 0, 0, &cfg(0, 0)), 5.0);
        let other = path(&["x", "y"]);
        assert_eq!(kappa_rd_hard(&g, &other, 0, 0, &cfg(0, 0)), 0.0);
        let two = path(&["a", "b"]);
        assert_eq!(kappa_rd_hard(&two, &two, 0, 0, &cfg(0, 1)), 2.0);
        assert_eq!(kappa_rd_hard(&two, &two, 0, 1, &cfg(0, 1)), 2.0);
    }

    #[test]
    fn soft_histogram() {
        // A = {a, b} rooted at a, B = {a, b, c} rooted at b, distance 1
        let mut g = Graph::new();
        for l in ["a", "b", "c"] {
            g.add_vertex(Vertex::plain(l));
        }
        g.add_edge(0, 1, "x");
        g.add_edge(1, 2, "x");
        let c = KernelConfig {
            use_kernel_points: true,
            ..KernelConfig::new(1, 1, MatchKind::Soft)
        };
        g.vertex_mut(0).kernel_point = true;
        g.vertex_mut(1).kernel_point = true;
        let first = [0usize];
        let p = profile(&g, &c, Some(&first));
        let item = p[&(1, 1)].iter().find(|_| true).unwrap();
        assert_eq!(sparse_dot(&item.vec, &item.vec), 9.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_rd(3.0, 3.0, 3.0), 1.0);
        assert_eq!(normalize_rd(1.0, 0.0, 3.0), 0.0);
        assert_eq!(normalize_rd(2.0, 4.0, 1.0), 1.0);
    }

    #[test]
    fn self_kernel_counts_blocks() {
        let g = path(&["a", "b", "c", "a"]);
        let c = cfg(2, 3);
        assert!((kernel(&g, &g, &c) - 12.0).abs() < 1e-12);
        assert_eq!(kernel(&Graph::new(), &g, &c), 0.0);
    }
}
