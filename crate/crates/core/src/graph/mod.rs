//! Bipartite labeled graphs built from interpretations.
//!
//! Entity vertices come from E-atoms, relation vertices from R-atoms. An
//! edge joins an entity vertex to every relation vertex whose identifier
//! columns mention it, labeled by the role of that column.

mod dot;
mod viewpoint;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::atom::{Atom, AtomSet, Constant};
use crate::dataset::{PropertyKind, PropertyKinds};
use crate::schema::Schema;

pub use dot::{adjacency_dump, export_dot};
pub use viewpoint::{build_viewpoint, insert_case, Viewpoint};

/// Separates the signature name and discrete property values in a label.
pub const LABEL_SEP: char = '\u{1f}';

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("`{atom}` references {entity} `{id}`, which has no entity atom")]
    DanglingIdentifier { atom: String, entity: String, id: String },
    #[error("entity {entity} `{id}` is declared twice")]
    DuplicateEntity { entity: String, id: String },
    #[error("case `{0}` has no vertex in the graph")]
    CaseNotInGraph(String),
    #[error("`{0}` is not a declared signature")]
    Undeclared(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Entity,
    Relation,
}

/// One property value of a vertex tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum Prop {
    Discrete(Constant),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub signature: Arc<str>,
    /// Property values in declared column order.
    pub props: Vec<Prop>,
    /// Signature name and discrete property values, joined by [`LABEL_SEP`].
    pub label: Arc<str>,
    /// Identifier arguments of the source atom. Never part of any label.
    pub ids: Vec<Constant>,
    pub kernel_point: bool,
}

impl Vertex {
    /// A bare vertex whose label and signature are both `label`.
    pub fn plain(label: &str) -> Vertex {
        Vertex {
            kind: VertexKind::Entity,
            signature: Arc::from(label),
            props: Vec::new(),
            label: Arc::from(label),
            ids: Vec::new(),
            kernel_point: false,
        }
    }

    pub fn with_props(kind: VertexKind, signature: &str, props: Vec<Prop>) -> Vertex {
        let label = make_label(signature, &props);
        Vertex {
            kind,
            signature: Arc::from(signature),
            props,
            label,
            ids: Vec::new(),
            kernel_point: false,
        }
    }

    pub fn has_discrete(&self) -> bool {
        self.props.iter().any(|p| matches!(p, Prop::Discrete(_)))
    }

    pub fn has_real(&self) -> bool {
        self.props.iter().any(|p| matches!(p, Prop::Real(_)))
    }

    /// Label with the separator shown as `:`.
    pub fn display_label(&self) -> String {
        self.label.replace(LABEL_SEP, ":")
    }
}

fn make_label(signature: &str, props: &[Prop]) -> Arc<str> {
    let mut s = String::from(signature);
    for p in props {
        if let Prop::Discrete(c) = p {
            s.push(LABEL_SEP);
            s.push_str(&c.to_string());
        }
    }
    Arc::from(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub role: Arc<str>,
}

/// An undirected labeled multigraph. Vertex indices are dense and stable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
    /// Source atom of each vertex, when built from atoms.
    atoms: Vec<Option<Atom>>,
    by_atom: BTreeMap<Atom, usize>,
}

/// Graph produced from ground atoms; entity vertices precede relation vertices.
pub type GroundedGraph = Graph;

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) -> usize {
        self.vertices.push(v);
        self.adj.push(Vec::new());
        self.atoms.push(None);
        self.vertices.len() - 1
    }

    fn add_atom_vertex(&mut self, v: Vertex, atom: Atom) -> usize {
        let i = self.add_vertex(v);
        self.by_atom.insert(atom.clone(), i);
        self.atoms[i] = Some(atom);
        i
    }

    pub fn add_edge(&mut self, u: usize, v: usize, role: &str) -> usize {
        let e = self.edges.len();
        self.edges.push(Edge {
            u,
            v,
            role: Arc::from(role),
        });
        self.adj[u].push((v, e));
        if u != v {
            self.adj[v].push((u, e));
        }
        e
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn vertex_mut(&mut self, i: usize) -> &mut Vertex {
        &mut self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// `(neighbor, edge index)` pairs; parallel edges appear once each.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn atom_of(&self, v: usize) -> Option<&Atom> {
        self.atoms[v].as_ref()
    }

    pub fn vertex_of(&self, atom: &Atom) -> Option<usize> {
        self.by_atom.get(atom).copied()
    }

    pub fn entity_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Entity).count()
    }

    pub fn relation_count(&self) -> usize {
        self.len() - self.entity_count()
    }

    /// Subgraph on the vertices with `keep[i]`, renumbered in order.
    pub fn retain(&self, keep: &[bool]) -> Graph {
        let mut map = vec![usize::MAX; self.len()];
        let mut g = Graph::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if keep[i] {
                map[i] = match &self.atoms[i] {
                    Some(a) => g.add_atom_vertex(v.clone(), a.clone()),
                    None => g.add_vertex(v.clone()),
                };
            }
        }
        for e in &self.edges {
            if keep[e.u] && keep[e.v] {
                g.add_edge(map[e.u], map[e.v], &e.role);
            }
        }
        g
    }

    /// Same graph with vertices reordered: vertex `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut inv = vec![0; self.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut g = Graph::new();
        for &old in &inv {
            match &self.atoms[old] {
                Some(a) => g.add_atom_vertex(self.vertices[old].clone(), a.clone()),
                None => g.add_vertex(self.vertices[old].clone()),
            };
        }
        for e in &self.edges {
            g.add_edge(perm[e.u], perm[e.v], &e.role);
        }
        g
    }

    /// Whether every edge joins an entity vertex to a relation vertex.
    pub fn is_bipartite(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.vertices[e.u].kind != self.vertices[e.v].kind)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&adjacency_dump(self))
    }
}

/// Vertex for a ground atom of `sig`, with properties typed by `kinds`.
pub(crate) fn atom_vertex(schema: &Schema, kinds: &PropertyKinds, atom: &Atom) -> Result<Vertex, GraphError> {
    let sig = schema
        .signature(&atom.predicate)
        .ok_or_else(|| GraphError::Undeclared(atom.predicate.to_string()))?;
    let mut props = Vec::new();
    let mut ids = Vec::new();
    for (col, c) in sig.columns.iter().enumerate() {
        let value = &atom.args[col];
        if c.is_identifier() {
            ids.push(value.clone());
            continue;
        }
        props.push(match (kinds.get(&sig.name, col), value.as_f64()) {
            (PropertyKind::Numeric, Some(x)) => Prop::Real(x),
            _ => Prop::Discrete(value.clone()),
        });
    }
    let kind = if sig.is_entity() {
        VertexKind::Entity
    } else {
        VertexKind::Relation
    };
    let mut v = Vertex::with_props(kind, &sig.name, props);
    v.ids = ids;
    v.kernel_point = sig.is_kernel_point;
    Ok(v)
}

type EntityKey = (Arc<str>, Constant);

pub(crate) fn entity_index(g: &Graph) -> BTreeMap<EntityKey, usize> {
    let mut out = BTreeMap::new();
    for (i, v) in g.vertices.iter().enumerate() {
        if v.kind == VertexKind::Entity {
            if let Some(id) = v.ids.first() {
                out.insert((v.signature.clone(), id.clone()), i);
            }
        }
    }
    out
}

/// Connect relation vertex `rv` built from `atom` to its entity vertices.
pub(crate) fn connect(
    g: &mut Graph,
    schema: &Schema,
    entities: &BTreeMap<EntityKey, usize>,
    rv: usize,
    atom: &Atom,
) -> Result<(), GraphError> {
    let sig = schema.signature(&atom.predicate).expect("declared");
    for (col, c) in sig.identifier_columns() {
        let entity = sig.entity_set_of(col).expect("identifier column").clone();
        let id = atom.args[col].clone();
        let Some(&ev) = entities.get(&(entity.clone(), id.clone())) else {
            return Err(GraphError::DanglingIdentifier {
                atom: atom.to_string(),
                entity: entity.to_string(),
                id: id.to_string(),
            });
        };
        g.add_edge(ev, rv, &c.role);
    }
    Ok(())
}

/// Build the bipartite graph of `atoms`. Atoms of undeclared predicates
/// produce no vertices.
pub fn graphicalize(schema: &Schema, kinds: &PropertyKinds, atoms: &AtomSet) -> Result<GroundedGraph, GraphError> {
    let mut g = Graph::new();
    let declared: Vec<&Atom> = atoms.iter().filter(|a| schema.is_declared(&a.predicate)).collect();
    let mut entities = BTreeMap::new();
    for a in &declared {
        let sig = schema.signature(&a.predicate).expect("declared");
        if !sig.is_entity() {
            continue;
        }
        let (col, _) = sig
            .columns
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_identifier())
            .expect("entity signature has an identifier");
        let key = (sig.name.clone(), a.args[col].clone());
        if entities.contains_key(&key) {
            return Err(GraphError::DuplicateEntity {
                entity: key.0.to_string(),
                id: key.1.to_string(),
            });
        }
        let v = g.add_atom_vertex(atom_vertex(schema, kinds, a)?, (*a).clone());
        entities.insert(key, v);
    }
    for a in &declared {
        let sig = schema.signature(&a.predicate).expect("declared");
        if sig.is_entity() {
            continue;
        }
        let rv = g.add_atom_vertex(atom_vertex(schema, kinds, a)?, (*a).clone());
        connect(&mut g, schema, &entities, rv, a)?;
    }
    Ok(g)
}
