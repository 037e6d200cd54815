use std::collections::BTreeSet;

use crate::atom::{Atom, AtomSet};
use crate::schema::Schema;

use super::{connect, entity_index, Graph, GraphError, Vertex, VertexKind};

/// A case vertex together with the mutilated graph it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct Viewpoint {
    pub case: Atom,
    pub case_vertex: usize,
    /// Entity vertices adjacent to the case vertex, ascending.
    pub w: Vec<usize>,
    pub graph: Graph,
}

fn neighbors_of(g: &Graph, v: usize) -> Vec<usize> {
    let set: BTreeSet<usize> = g.neighbors(v).iter().map(|&(n, _)| n).collect();
    set.into_iter().collect()
}

/// Remove every vertex of `y_atoms` except the one of `case`.
pub fn build_viewpoint(graph: &Graph, y_atoms: &AtomSet, case: &Atom) -> Result<Viewpoint, GraphError> {
    if graph.vertex_of(case).is_none() {
        return Err(GraphError::CaseNotInGraph(case.to_string()));
    }
    let keep: Vec<bool> = (0..graph.len())
        .map(|i| match graph.atom_of(i) {
            Some(a) => a == case || !y_atoms.contains(a),
            None => true,
        })
        .collect();
    let g = graph.retain(&keep);
    let cv = g.vertex_of(case).expect("case kept");
    Ok(Viewpoint {
        case: case.clone(),
        case_vertex: cv,
        w: neighbors_of(&g, cv),
        graph: g,
    })
}

/// Add a vertex for `case` to `graph` (the graph of the input atoms only).
/// The case vertex is labeled by its signature name alone, so its output
/// properties cannot leak into features.
pub fn insert_case(graph: &Graph, schema: &Schema, case: &Atom) -> Result<Viewpoint, GraphError> {
    let sig = schema
        .signature(&case.predicate)
        .ok_or_else(|| GraphError::Undeclared(case.predicate.to_string()))?;
    let mut g = graph.clone();
    let entities = entity_index(&g);
    let mut v = Vertex::with_props(VertexKind::Relation, &sig.name, Vec::new());
    v.ids = sig.identifier_columns().map(|(c, _)| case.args[c].clone()).collect();
    v.kernel_point = sig.is_kernel_point;
    let cv = g.add_vertex(v);
    connect(&mut g, schema, &entities, cv, case).map_err(|e| match e {
        GraphError::DanglingIdentifier { .. } => GraphError::CaseNotInGraph(case.to_string()),
        other => other,
    })?;
    Ok(Viewpoint {
        case: case.clone(),
        case_vertex: cv,
        w: neighbors_of(&g, cv),
        graph: g,
    })
}
