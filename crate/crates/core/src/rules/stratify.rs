use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::Rule;

/// A group of rules whose heads share one stratum number.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub index: usize,
    pub predicates: BTreeSet<Arc<str>>,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StratifyError {
    #[error("unstratifiable program: cycle through negation or aggregation: {}", .cycle.join(" -> "))]
    Unstratifiable { cycle: Vec<String> },
}

struct DepGraph {
    graph: DiGraph<Arc<str>, bool>,
    nodes: HashMap<Arc<str>, NodeIndex>,
}

impl DepGraph {
    // Edge body -> head, weight = non-monotone dependency.
    fn build(rules: &[Rule]) -> Self {
        let mut graph = DiGraph::new();
        let mut nodes: HashMap<Arc<str>, NodeIndex> = HashMap::new();
        let mut node = |g: &mut DiGraph<Arc<str>, bool>, p: &Arc<str>| {
            *nodes.entry(p.clone()).or_insert_with(|| g.add_node(p.clone()))
        };
        // deterministic node order
        let mut names: BTreeSet<Arc<str>> = BTreeSet::new();
        for r in rules {
            names.insert(r.head.predicate.clone());
            for (p, _) in r.dependencies() {
                names.insert(p);
            }
        }
        for p in &names {
            node(&mut graph, p);
        }
        for r in rules {
            let h = node(&mut graph, &r.head.predicate);
            for (p, nonmono) in r.dependencies() {
                let b = node(&mut graph, &p);
                graph.add_edge(b, h, nonmono);
            }
        }
        DepGraph { graph, nodes }
    }
}

/// Partition `rules` into strata such that every negated or aggregated
/// dependency points to a strictly lower stratum. Predicates without rules
/// sit in stratum 0; positive recursion inside a stratum is allowed.
pub fn stratify(rules: &[Rule]) -> Result<Vec<Stratum>, StratifyError> {
    let dg = DepGraph::build(rules);
    let g = &dg.graph;
    let sccs = tarjan_scc(g);
    let mut scc_of = vec![0usize; g.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for n in scc {
            scc_of[n.index()] = i;
        }
    }
    for e in g.edge_indices() {
        let (a, b) = g.edge_endpoints(e).unwrap();
        if g[e] && scc_of[a.index()] == scc_of[b.index()] {
            return Err(StratifyError::Unstratifiable {
                cycle: find_cycle(g, a, b, &scc_of),
            });
        }
    }
    // tarjan_scc yields reverse topological order
    let mut level = vec![0usize; sccs.len()];
    for i in (0..sccs.len()).rev() {
        let mut lv = 0;
        for n in &sccs[i] {
            for e in g.edges_directed(*n, petgraph::Direction::Incoming) {
                use petgraph::visit::EdgeRef;
                let src = scc_of[e.source().index()];
                if src == i {
                    continue;
                }
                lv = lv.max(level[src] + usize::from(*e.weight()));
            }
        }
        level[i] = lv;
    }
    let mut by_level: BTreeMap<usize, Stratum> = BTreeMap::new();
    for r in rules {
        let n = dg.nodes[&r.head.predicate];
        let lv = level[scc_of[n.index()]];
        let s = by_level.entry(lv).or_insert_with(|| Stratum {
            index: lv,
            predicates: BTreeSet::new(),
            rules: Vec::new(),
        });
        s.predicates.insert(r.head.predicate.clone());
        s.rules.push(r.clone());
    }
    Ok(by_level.into_values().collect())
}

fn find_cycle(g: &DiGraph<Arc<str>, bool>, from: NodeIndex, to: NodeIndex, scc_of: &[usize]) -> Vec<String> {
    // path to -> ... -> from inside the component, closing the edge from -> to
    let comp = scc_of[from.index()];
    let mut prev: HashMap<NodeIndex, NodeIndex> = HashMap::new();
    let mut queue = VecDeque::from([to]);
    let mut seen = BTreeSet::from([to]);
    while let Some(n) = queue.pop_front() {
        if n == from {
            break;
        }
        for m in g.neighbors(n) {
            if scc_of[m.index()] == comp && seen.insert(m) {
                prev.insert(m, n);
                queue.push_back(m);
            }
        }
    }
    let mut path = vec![from];
    let mut cur = from;
    while cur != to {
        match prev.get(&cur) {
            Some(p) => {
                cur = *p;
                path.push(cur);
            }
            None => break,
        }
    }
    path.reverse();
    let mut names: Vec<String> = path.iter().map(|n| g[*n].to_string()).collect();
    names.insert(0, g[from].to_string());
    names
}

/// Every predicate that (transitively) depends on one of `roots`, including
/// the roots themselves.
pub fn dependency_closure(rules: &[Rule], roots: &[&str]) -> BTreeSet<Arc<str>> {
    let mut dependents: HashMap<Arc<str>, BTreeSet<Arc<str>>> = HashMap::new();
    for r in rules {
        for (p, _) in r.dependencies() {
            dependents.entry(p).or_default().insert(r.head.predicate.clone());
        }
    }
    let mut out: BTreeSet<Arc<str>> = roots.iter().map(|r| Arc::from(*r)).collect();
    let mut queue: VecDeque<Arc<str>> = out.iter().cloned().collect();
    while let Some(p) = queue.pop_front() {
        if let Some(ds) = dependents.get(&p) {
            for d in ds {
                if out.insert(d.clone()) {
                    queue.push_back(d.clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rules;

    #[test]
    fn positive_program_single_stratum() {
        let rules =
            parse_rules("on_same_paper(S,P) :- student(S), professor(P), publication(Pub,S), publication(Pub,P).")
                .unwrap();
        let strata = stratify(&rules).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(strata[0].index, 0);
    }

    #[test]
    fn negation_cycle_rejected() {
        let rules = parse_rules("p :- \\+ q.\nq :- \\+ p.").unwrap();
        match stratify(&rules) {
            Err(StratifyError::Unstratifiable { cycle }) => {
                assert_eq!(cycle.first(), cycle.last());
                assert!(cycle.contains(&"p".to_string()) && cycle.contains(&"q".to_string()));
            }
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn aggregate_sits_above_its_input() {
        let rules = parse_rules(
            "n(S,P,N) :- student(S), professor(P), N = count { Pub : publication(Pub,S), publication(Pub,P) }.",
        )
        .unwrap();
        let strata = stratify(&rules).unwrap();
        assert_eq!(strata.len(), 1);
        // publication has no rules, so it is at level 0
        assert_eq!(strata[0].index, 1);
    }

    #[test]
    fn positive_recursion_allowed() {
        let rules = parse_rules(
            "path(X,Y) :- edge(X,Y).\npath(X,Z) :- path(X,Y), edge(Y,Z).\nunreach(X,Y) :- node(X), node(Y), \\+ path(X,Y).",
        )
        .unwrap();
        let strata = stratify(&rules).unwrap();
        assert_eq!(strata.len(), 2);
        assert!(strata[0].predicates.contains("path"));
        assert!(strata[1].predicates.contains("unreach"));
    }

    #[test]
    fn closure_follows_rule_bodies() {
        let rules = parse_rules(
            "coadvised(A,B) :- advised_by(A,P), advised_by(B,P).\nfar(A) :- coadvised(A,B).\nother(X) :- student(X).",
        )
        .unwrap();
        let c = dependency_closure(&rules, &["advised_by"]);
        let names: Vec<&str> = c.iter().map(|s| &**s).collect();
        assert_eq!(names, vec!["advised_by", "coadvised", "far"]);
    }
}
