use std::collections::VecDeque;

use crate::graph::Graph;

use super::KernelError;

/// Breadth-first distances from `src`, stopping at `limit`. Returned in
/// visiting order, so distances are non-decreasing.
pub fn bfs(g: &Graph, src: usize, limit: usize) -> Vec<(usize, u32)> {
    let mut seen = vec![false; g.len()];
    let mut out = vec![(src, 0u32)];
    let mut queue = VecDeque::from([(src, 0u32)]);
    seen[src] = true;
    while let Some((v, d)) = queue.pop_front() {
        if d as usize >= limit {
            continue;
        }
        for &(n, _) in g.neighbors(v) {
            if !seen[n] {
                seen[n] = true;
                out.push((n, d + 1));
                queue.push_back((n, d + 1));
            }
        }
    }
    out
}

/// Subgraph induced by the vertices within distance `radius` of `root`.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    pub root: usize,
    pub radius: usize,
    /// Member vertices, ascending.
    pub vertices: Vec<usize>,
    /// Distance from the root of each member, aligned with `vertices`.
    pub root_dist: Vec<u32>,
    /// Indices of the edges with both endpoints inside.
    pub edges: Vec<usize>,
}

impl Neighborhood {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

pub fn neighborhood(g: &Graph, root: usize, radius: usize) -> Result<Neighborhood, KernelError> {
    if root >= g.len() {
        return Err(KernelError::VertexNotFound(root));
    }
    Ok(neighborhood_from(g, root, radius, &bfs(g, root, radius)))
}

/// Build from a BFS of `root` whose limit is at least `radius`.
pub(crate) fn neighborhood_from(g: &Graph, root: usize, radius: usize, dists: &[(usize, u32)]) -> Neighborhood {
    let mut members: Vec<(usize, u32)> = dists
        .iter()
        .copied()
        .take_while(|&(_, d)| d as usize <= radius)
        .collect();
    members.sort_unstable();
    let vertices: Vec<usize> = members.iter().map(|m| m.0).collect();
    let root_dist = members.iter().map(|m| m.1).collect();
    let mut edges = Vec::new();
    for &v in &vertices {
        for &(n, e) in g.neighbors(v) {
            // each edge once: from its `u` endpoint
            if g.edge(e).u == v && vertices.binary_search(&n).is_ok() {
                edges.push(e);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Neighborhood {
        root,
        radius,
        vertices,
        root_dist,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn path_abc_plus_d() -> Graph {
        let mut g = Graph::new();
        for l in ["a", "b", "c", "d"] {
            g.add_vertex(Vertex::plain(l));
        }
        g.add_edge(0, 1, "x");
        g.add_edge(1, 2, "x");
        g
    }

    #[test]
    fn radius_zero_is_root_only() {
        let n = neighborhood(&path_abc_plus_d(), 1, 0).unwrap();
        assert_eq!(n.vertices, [1]);
        assert!(n.edges.is_empty());
    }

    #[test]
    fn radius_one_covers_path() {
        let n = neighborhood(&path_abc_plus_d(), 1, 1).unwrap();
        assert_eq!(n.vertices, [0, 1, 2]);
        assert_eq!(n.root_dist, [1, 0, 1]);
        assert_eq!(n.edges.len(), 2);
    }

    #[test]
    fn unreachable_excluded() {
        let n = neighborhood(&path_abc_plus_d(), 1, 5).unwrap();
        assert!(!n.contains(3));
        assert!(matches!(
            neighborhood(&path_abc_plus_d(), 9, 1),
            Err(KernelError::VertexNotFound(9))
        ));
    }
}
