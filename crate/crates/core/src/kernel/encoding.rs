//! Graph invariant: every vertex is coded by its distance from the root
//! and the sorted `(distance, label)` pairs it sees inside the subgraph;
//! every edge by its two endpoint codes and its role; the graph by the
//! sorted edge codes (sorted vertex codes when there are no edges).

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::graph::Graph;

use super::hash::{hash_str, Fnv};
use super::Neighborhood;

/// 64-bit hash of an invariant encoding.
pub type PseudoId = u64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexCode {
    /// `None` for unrooted whole-graph encodings.
    pub root_dist: Option<u32>,
    pub pairs: Vec<(u32, Arc<str>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCode {
    pub lo: VertexCode,
    pub hi: VertexCode,
    pub role: Arc<str>,
}

/// Unhashed invariant encoding; equal for isomorphic rooted graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Encoding {
    Vertices(Vec<VertexCode>),
    Edges(Vec<EdgeCode>),
}

/// Members with local adjacency restricted to the member set.
struct Local {
    members: Vec<usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
}

fn local(g: &Graph, members: &[usize], edges: &[usize]) -> Local {
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); members.len()];
    let mut es = Vec::with_capacity(edges.len());
    for &e in edges {
        let edge = g.edge(e);
        let (a, b) = (pos[&edge.u], pos[&edge.v]);
        adj[a].push(b);
        if a != b {
            adj[b].push(a);
        }
        es.push((a, b, e));
    }
    Local {
        members: members.to_vec(),
        adj,
        edges: es,
    }
}

fn local_bfs(l: &Local, src: usize) -> Vec<(usize, u32)> {
    let mut dist = vec![u32::MAX; l.members.len()];
    dist[src] = 0;
    let mut out = vec![(src, 0)];
    let mut q = VecDeque::from([src]);
    while let Some(v) = q.pop_front() {
        for &n in &l.adj[v] {
            if dist[n] == u32::MAX {
                dist[n] = dist[v] + 1;
                out.push((n, dist[n]));
                q.push_back(n);
            }
        }
    }
    out
}

/// Explicit encoding of the subgraph on `members` with edges `edges`.
pub fn encode(g: &Graph, members: &[usize], edges: &[usize], root_dist: Option<&[u32]>) -> Encoding {
    let l = local(g, members, edges);
    let codes: Vec<VertexCode> = (0..l.members.len())
        .map(|i| {
            let mut pairs: Vec<(u32, Arc<str>)> = local_bfs(&l, i)
                .into_iter()
                .map(|(j, d)| (d, g.vertex(l.members[j]).label.clone()))
                .collect();
            pairs.sort();
            VertexCode {
                root_dist: root_dist.map(|r| r[i]),
                pairs,
            }
        })
        .collect();
    if l.edges.is_empty() {
        let mut v = codes;
        v.sort();
        return Encoding::Vertices(v);
    }
    let mut es: Vec<EdgeCode> = l
        .edges
        .iter()
        .map(|&(a, b, e)| {
            let (lo, hi) = if codes[a] <= codes[b] { (a, b) } else { (b, a) };
            EdgeCode {
                lo: codes[lo].clone(),
                hi: codes[hi].clone(),
                role: g.edge(e).role.clone(),
            }
        })
        .collect();
    es.sort();
    Encoding::Edges(es)
}

pub fn encode_neighborhood(g: &Graph, n: &Neighborhood) -> Encoding {
    encode(g, &n.vertices, &n.edges, Some(&n.root_dist))
}

/// Unrooted encoding of a whole graph.
pub fn encode_graph(g: &Graph) -> Encoding {
    let members: Vec<usize> = (0..g.len()).collect();
    let edges: Vec<usize> = (0..g.edges().len()).collect();
    encode(g, &members, &edges, None)
}

/// Hashed counterpart of [`encode`]: the pseudo-identifier plus the hash
/// of every member's vertex code, aligned with `members`.
pub(crate) fn hash_codes(
    g: &Graph,
    members: &[usize],
    edges: &[usize],
    root_dist: Option<&[u32]>,
    label_hash: &[u64],
) -> (PseudoId, Vec<u64>) {
    let l = local(g, members, edges);
    let mut codes = Vec::with_capacity(l.members.len());
    let mut pairs: Vec<(u32, u64)> = Vec::new();
    for i in 0..l.members.len() {
        pairs.clear();
        pairs.extend(local_bfs(&l, i).into_iter().map(|(j, d)| (d, label_hash[l.members[j]])));
        pairs.sort_unstable();
        let mut h = Fnv::tagged(b'v');
        h.write_u32(root_dist.map_or(u32::MAX, |r| r[i]));
        for &(d, lh) in &pairs {
            h.write_u64(Fnv::tagged(b'p').write_u32(d).write_u64(lh).finish());
        }
        codes.push(h.finish());
    }
    let mut parts: Vec<u64>;
    let tag;
    if l.edges.is_empty() {
        tag = b'V';
        parts = codes.clone();
    } else {
        tag = b'E';
        parts = l
            .edges
            .iter()
            .map(|&(a, b, e)| {
                let (lo, hi) = (codes[a].min(codes[b]), codes[a].max(codes[b]));
                Fnv::tagged(b'e')
                    .write_u64(lo)
                    .write_u64(hi)
                    .write_u64(hash_str(&g.edge(e).role))
                    .finish()
            })
            .collect();
    }
    parts.sort_unstable();
    let mut h = Fnv::tagged(tag);
    for p in parts {
        h.write_u64(p);
    }
    (h.finish(), codes)
}

pub(crate) fn label_hashes(g: &Graph) -> Vec<u64> {
    g.vertices().iter().map(|v| hash_str(&v.label)).collect()
}

pub fn invariant_encoding(g: &Graph, n: &Neighborhood) -> PseudoId {
    hash_codes(g, &n.vertices, &n.edges, Some(&n.root_dist), &label_hashes(g)).0
}

/// Pseudo-identifier of a whole graph, without a root.
pub fn graph_pseudo_id(g: &Graph) -> PseudoId {
    let members: Vec<usize> = (0..g.len()).collect();
    let edges: Vec<usize> = (0..g.edges().len()).collect();
    hash_codes(g, &members, &edges, None, &label_hashes(g)).0
}
