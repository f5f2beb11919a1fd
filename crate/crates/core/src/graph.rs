//! The degeneration order on one variety: reachability, Hasse diagram,
//! maximal nodes and irreducible components.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use petgraph::algo::tred::{dag_to_toposorted_adjacency_list, dag_transitive_reduction_closure};
use petgraph::algo::toposort;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::IntoNeighbors;
use thiserror::Error;

use crate::catalog::{kind_name, Catalog, CatalogEntry, DegenerationCertificate};
use crate::degeneration::{battery, verify_degeneration, Certificate, Profile};
use crate::identity::check_associativity;
use crate::invariants::even_derivation_dim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeStatus {
    /// Backed by a certificate that verifies.
    Verified,
    /// Taken from supplied data without a certificate.
    Imported,
    /// The degeneration to the trivial algebra, always present.
    Implicit,
}

impl fmt::Display for EdgeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeStatus::Verified => "verified",
            EdgeStatus::Imported => "imported",
            EdgeStatus::Implicit => "implicit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub status: EdgeStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{0:?} is not an entry of type {1}")]
    UnknownNode(String, String),
    #[error("degeneration order has a cycle through {0}")]
    Cycle(String),
    #[error("no trivial algebra of type {0} in the catalog")]
    NoTrivial(String),
    #[error("no battery certificate for {from} -/-> {to}; components not asserted")]
    MissingCertificate { from: String, to: String },
}

/// What the diagram shows about a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub name: String,
    /// Short label, e.g. `7` or `31^lambda`.
    pub label: String,
    pub aut_dim: usize,
    pub associative: bool,
    pub family: bool,
}

#[derive(Debug, Clone)]
pub struct HasseGraph {
    pub kind: (usize, usize),
    /// In catalog order.
    pub nodes: Vec<NodeInfo>,
    /// Direct degenerations, excluding the implicit ones.
    pub edges: Vec<Edge>,
    /// Transitive reduction of `edges` plus the implicit edges.
    pub reduced_edges: Vec<Edge>,
    /// Nodes with no incoming edge, in catalog order.
    pub maximal_nodes: Vec<String>,
    trivial: String,
    // reach[i][j]: node j lies in the closure of node i (reflexive)
    reach: Vec<Vec<bool>>,
}

impl HasseGraph {
    pub fn empty(kind: (usize, usize)) -> Self {
        HasseGraph {
            kind,
            nodes: Vec::new(),
            edges: Vec::new(),
            reduced_edges: Vec::new(),
            maximal_nodes: Vec::new(),
            trivial: String::new(),
            reach: Vec::new(),
        }
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Whether `source` degenerates to `target` (reflexive, transitive).
    pub fn reaches(&self, source: &str, target: &str) -> bool {
        match (self.index(source), self.index(target)) {
            (Some(i), Some(j)) => self.reach[i][j],
            _ => false,
        }
    }

    pub fn trivial(&self) -> &str {
        &self.trivial
    }

    pub fn node(&self, name: &str) -> Option<&NodeInfo> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// Reachability of the reduced edges as a boolean matrix.
    pub fn reduced_reachability(&self) -> Vec<Vec<bool>> {
        let pairs: Vec<(usize, usize)> = self
            .reduced_edges
            .iter()
            .filter_map(|e| Some((self.index(&e.source)?, self.index(&e.target)?)))
            .collect();
        closure(self.nodes.len(), &pairs)
    }

    /// The full order as a boolean matrix.
    pub fn reachability(&self) -> &[Vec<bool>] {
        &self.reach
    }

    /// `source,target,status` lines for the reduced edges, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,target,status\n");
        for e in &self.reduced_edges {
            let _ = writeln!(out, "{},{},{}", self.label_of(&e.source), self.label_of(&e.target), e.status);
        }
        out
    }

    fn label_of<'a>(&'a self, name: &'a str) -> &'a str {
        self.node(name).map_or(name, |n| n.label.as_str())
    }
}

/// Reflexive-transitive closure of a relation on `0..n` (Warshall).
pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

fn node_info(e: &CatalogEntry) -> NodeInfo {
    NodeInfo {
        name: e.name.clone(),
        label: Catalog::table_label(e),
        aut_dim: even_derivation_dim(&e.algebra),
        associative: check_associativity(&e.algebra),
        family: e.is_family(),
    }
}

/// Builds the order on type `kind` from direct degenerations. Every node
/// degenerates to the trivial algebra; that edge enters the reduced diagram
/// only for nodes with no other successor.
pub fn build_hasse(catalog: &Catalog, kind: (usize, usize), edges: &[Edge]) -> Result<HasseGraph, GraphError> {
    let entries = catalog.of_kind(kind);
    if entries.is_empty() && edges.is_empty() {
        return Ok(HasseGraph::empty(kind));
    }
    let nodes: Vec<NodeInfo> = entries.iter().map(|e| node_info(e)).collect();
    let trivial = entries
        .iter()
        .find(|e| !e.is_family() && e.algebra.nonzero_products().is_empty())
        .map(|e| e.name.clone())
        .ok_or_else(|| GraphError::NoTrivial(kind_name(kind)))?;
    let pos: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.name.as_str(), i)).collect();
    let idx = |name: &str| pos.get(name).copied().ok_or_else(|| GraphError::UnknownNode(name.to_string(), kind_name(kind)));

    let mut direct: Vec<Edge> = Vec::new();
    for e in edges {
        let (a, b) = (idx(&e.source)?, idx(&e.target)?);
        if a == b {
            return Err(GraphError::Cycle(e.source.clone()));
        }
        if e.target != trivial && !direct.iter().any(|d| d.source == e.source && d.target == e.target) {
            direct.push(e.clone());
        }
    }

    let mut g: DiGraph<usize, ()> = DiGraph::new();
    let ix: Vec<NodeIndex> = (0..nodes.len()).map(|i| g.add_node(i)).collect();
    for e in &direct {
        g.add_edge(ix[pos[e.source.as_str()]], ix[pos[e.target.as_str()]], ());
    }
    let order = toposort(&g, None).map_err(|c| GraphError::Cycle(nodes[g[c.node_id()]].name.clone()))?;
    let (adj, revmap) = dag_to_toposorted_adjacency_list::<_, u32>(&g, &order);
    let (red, _) = dag_transitive_reduction_closure(&adj);

    let t = pos[trivial.as_str()];
    let mut pairs: Vec<(usize, usize)> = direct.iter().map(|e| (pos[e.source.as_str()], pos[e.target.as_str()])).collect();
    pairs.extend((0..nodes.len()).filter(|&i| i != t).map(|i| (i, t)));
    let reach = closure(nodes.len(), &pairs);

    let status: HashMap<(usize, usize), EdgeStatus> =
        direct.iter().map(|e| ((pos[e.source.as_str()], pos[e.target.as_str()]), e.status)).collect();
    let mut reduced = BTreeSet::new();
    for &gi in &order {
        let a = g[gi];
        for tj in red.neighbors(revmap[gi.index()]) {
            let b = g[order[tj as usize]];
            reduced.insert((a, b));
        }
    }
    let mut reduced_edges: Vec<Edge> = reduced
        .into_iter()
        .map(|(a, b)| Edge { source: nodes[a].name.clone(), target: nodes[b].name.clone(), status: status[&(a, b)] })
        .collect();
    for (i, n) in nodes.iter().enumerate() {
        if i != t && !direct.iter().any(|e| e.source == n.name) {
            reduced_edges.push(Edge { source: n.name.clone(), target: trivial.clone(), status: EdgeStatus::Implicit });
        }
    }
    reduced_edges.sort_by_key(|e| (pos[e.source.as_str()], pos[e.target.as_str()]));
    direct.sort_by_key(|e| (pos[e.source.as_str()], pos[e.target.as_str()]));

    let maximal_nodes =
        (0..nodes.len()).filter(|&j| !(0..nodes.len()).any(|i| i != j && reach[i][j])).map(|j| nodes[j].name.clone()).collect();
    Ok(HasseGraph { kind, nodes, edges: direct, reduced_edges, maximal_nodes, trivial, reach })
}

/// Verifies every certificate of type `kind` and returns the edges that pass
/// together with the failures.
pub fn verified_edges<'a>(
    catalog: &Catalog,
    kind: (usize, usize),
    certs: impl IntoIterator<Item = &'a DegenerationCertificate>,
) -> (Vec<Edge>, Vec<(&'a DegenerationCertificate, String)>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for c in certs {
        if catalog.get(&c.source).is_none_or(|e| e.kind() != kind) {
            continue;
        }
        match verify_degeneration(c, catalog) {
            Ok(_) => ok.push(Edge { source: c.source.clone(), target: c.target.clone(), status: EdgeStatus::Verified }),
            Err(e) => bad.push((c, e.to_string())),
        }
    }
    (ok, bad)
}

/// One irreducible component: the closure of the orbit (or of the union of
/// orbits, for a family) of a maximal node.
#[derive(Debug, Clone)]
pub struct Component {
    pub generator: String,
    pub label: String,
    pub family: bool,
    /// Number of nodes in the closure, the generator included.
    pub size: usize,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family {
            write!(f, "closure of the union of orbits of {} ({} nodes)", self.generator, self.size)
        } else {
            write!(f, "closure of O({}) ({} nodes)", self.generator, self.size)
        }
    }
}

/// Battery certificate for one ordered pair of maximal nodes.
#[derive(Debug, Clone)]
pub struct Separation {
    pub source: String,
    pub target: String,
    pub certificate: Certificate,
}

/// Components of a graph: one per maximal node, asserted only when the
/// battery separates every ordered pair of maximal nodes.
pub fn components(
    graph: &HasseGraph,
    profiles: &HashMap<String, Profile>,
) -> Result<(Vec<Component>, Vec<Separation>), GraphError> {
    let mut seps = Vec::new();
    for a in &graph.maximal_nodes {
        for b in &graph.maximal_nodes {
            if a == b {
                continue;
            }
            let missing = || GraphError::MissingCertificate { from: a.clone(), to: b.clone() };
            let (pa, pb) = (profiles.get(a).ok_or_else(missing)?, profiles.get(b).ok_or_else(missing)?);
            let cert = battery(pa, pb).into_iter().next().ok_or_else(missing)?;
            seps.push(Separation { source: a.clone(), target: b.clone(), certificate: cert });
        }
    }
    let comps = graph
        .maximal_nodes
        .iter()
        .map(|m| {
            let n = graph.node(m).expect("maximal node is a node");
            let i = graph.index(m).expect("maximal node is a node");
            Component {
                generator: m.clone(),
                label: n.label.clone(),
                family: n.family,
                size: graph.reach[i].iter().filter(|&&b| b).count(),
            }
        })
        .collect();
    Ok((comps, seps))
}

/// Lifts an edge list between even parts (labels `k` of `(4,1)_k`) to type
/// (4,1). Edges with a verifying certificate become verified, the rest are
/// imported.
pub fn type41_diagram(
    catalog: &Catalog,
    supplied: &[(String, String)],
    certs: &[&DegenerationCertificate],
) -> Result<HasseGraph, GraphError> {
    let kind = (4, 1);
    let name = |l: &str| format!("{}_{}", kind_name(kind), l);
    let (verified, _) = verified_edges(catalog, kind, certs.iter().copied());
    let edges: Vec<Edge> = supplied
        .iter()
        .map(|(s, t)| {
            let (s, t) = (name(s), name(t));
            let status = if verified.iter().any(|e| e.source == s && e.target == t) {
                EdgeStatus::Verified
            } else {
                EdgeStatus::Imported
            };
            Edge { source: s, target: t, status }
        })
        .collect();
    build_hasse(catalog, kind, &edges)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT text. Associative nodes are circles, maximal nodes are
/// filled gray, labels carry `dim Aut`. Imported edges are dashed.
pub fn export_dot(graph: &HasseGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", dot_id(&kind_name(graph.kind)));
    out.push_str("  rankdir=TB;\n  node [shape=box, fontsize=10];\n");
    for n in &graph.nodes {
        let mut attrs = vec![format!("label=\"{}\\ndim Aut = {}\"", n.label, n.aut_dim)];
        if n.associative {
            attrs.push("shape=circle".into());
        }
        if graph.maximal_nodes.contains(&n.name) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=gray".into());
        }
        let _ = writeln!(out, "  {} [{}];", dot_id(&n.label), attrs.join(", "));
    }
    for e in &graph.reduced_edges {
        let style = match e.status {
            EdgeStatus::Verified => "",
            EdgeStatus::Imported => " [style=dashed]",
            EdgeStatus::Implicit => " [style=dotted]",
        };
        let _ = writeln!(out, "  {} -> {}{};", dot_id(graph.label_of(&e.source)), dot_id(graph.label_of(&e.target)), style);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_catalog;

    const CAT: &str = r#"
[superalgebra]
name = "(1,2)_1"
even = 1
odd = 2

[superalgebra]
name = "(1,2)_2"
even = 1
odd = 2
product f1*f2 = e1

[superalgebra]
name = "(1,2)_3"
even = 1
odd = 2
product e1*e1 = e1
"#;

    fn cat() -> Catalog {
        Catalog::from_files(vec![parse_catalog(CAT).unwrap()]).unwrap()
    }

    fn edge(s: &str, t: &str) -> Edge {
        Edge { source: s.into(), target: t.into(), status: EdgeStatus::Verified }
    }

    #[test]
    fn single_edge_is_its_own_reduction() {
        let g = build_hasse(&cat(), (1, 2), &[edge("(1,2)_3", "(1,2)_2")]).unwrap();
        assert_eq!(g.edges, vec![edge("(1,2)_3", "(1,2)_2")]);
        assert!(g.reduced_edges.contains(&edge("(1,2)_3", "(1,2)_2")));
        // the implicit edge appears once, from the only node without a successor
        assert_eq!(g.reduced_edges.len(), 2);
        assert_eq!(g.reduced_edges.iter().filter(|e| e.status == EdgeStatus::Implicit).count(), 1);
        assert_eq!(g.maximal_nodes, vec!["(1,2)_3".to_string()]);
        assert!(g.reaches("(1,2)_3", "(1,2)_1"));
    }

    #[test]
    fn transitive_edge_is_dropped() {
        let edges = [edge("(1,2)_3", "(1,2)_2"), edge("(1,2)_2", "(1,2)_1"), edge("(1,2)_3", "(1,2)_1")];
        let g = build_hasse(&cat(), (1, 2), &edges).unwrap();
        assert_eq!(g.reduced_edges.len(), 2);
        assert_eq!(g.reduced_reachability(), g.reachability());
    }

    #[test]
    fn cycles_are_fatal() {
        let edges = [edge("(1,2)_3", "(1,2)_2"), edge("(1,2)_2", "(1,2)_3")];
        assert!(matches!(build_hasse(&cat(), (1, 2), &edges), Err(GraphError::Cycle(_))));
    }

    #[test]
    fn unknown_nodes_are_rejected() {
        let r = build_hasse(&cat(), (1, 2), &[edge("(1,2)_9", "(1,2)_1")]);
        assert!(matches!(r, Err(GraphError::UnknownNode(..))));
    }

    #[test]
    fn dot_marks_maximal_nodes() {
        let g = build_hasse(&cat(), (1, 2), &[edge("(1,2)_3", "(1,2)_2")]).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot.matches("fillcolor=gray").count(), 1);
        assert_eq!(dot, export_dot(&g));
        assert!(dot.contains("\"3\" -> \"2\";"));
    }

    #[test]
    fn empty_graph_gives_an_empty_digraph() {
        let g = build_hasse(&Catalog::default(), (2, 2), &[]).unwrap();
        let dot = export_dot(&g);
        assert!(dot.starts_with("digraph \"(2,2)\" {"));
        assert!(!dot.contains("->"));
        assert!(dot.ends_with("}\n"));
    }
}
