use std::fmt::Write;

use super::{Graph, VertexKind};

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        match ch {
            '"' | '\\' => {
                out.push('\\');
                out.push(ch);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

/// DOT text: one line per vertex, then one `--` line per edge.
pub fn export_dot(g: &Graph) -> String {
    if g.is_empty() {
        return "graph g {}\n".to_string();
    }
    let mut out = String::from("graph g {\n");
    for (i, v) in g.vertices().iter().enumerate() {
        let shape = match v.kind {
            VertexKind::Entity => "box",
            VertexKind::Relation => "oval",
        };
        let _ = writeln!(out, "  n{i} [label={}, shape={shape}];", quote(&v.display_label()));
    }
    for e in g.edges() {
        let _ = writeln!(out, "  n{} -- n{} [label={}];", e.u, e.v, quote(&e.role));
    }
    out.push_str("}\n");
    out
}

/// One edge per line: `u<TAB>label(u)<TAB>v<TAB>label(v)<TAB>role`.
pub fn adjacency_dump(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.u,
            g.vertex(e.u).display_label(),
            e.v,
            g.vertex(e.v).display_label(),
            e.role
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    #[test]
    fn empty_graph() {
        assert_eq!(export_dot(&Graph::new()).trim(), "graph g {}");
    }

    #[test]
    fn one_edge() {
        let mut g = Graph::new();
        let a = g.add_vertex(Vertex::plain("a"));
        let mut r = Vertex::plain("r");
        r.kind = VertexKind::Relation;
        let b = g.add_vertex(r);
        g.add_edge(a, b, "1");
        let dot = export_dot(&g);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 1);
        assert!(dot.contains("n0 -- n1 [label=\"1\"]"));
        assert!(dot.contains("shape=box") && dot.contains("shape=oval"));
        assert_eq!(adjacency_dump(&g), "0\ta\t1\tr\t1\n");
    }
}
