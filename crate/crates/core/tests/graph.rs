use std::collections::BTreeSet;

use superjordan::corpus::Corpus;
use superjordan::degeneration::{default_identities, profiles_for};
use superjordan::graph::{build_hasse, components, type41_diagram, verified_edges, EdgeStatus, HasseGraph};
use superjordan::Exec;

fn graph(corpus: &Corpus, kind: (usize, usize)) -> HasseGraph {
    let (edges, bad) = verified_edges(&corpus.catalog, kind, corpus.all_certificates());
    assert!(bad.is_empty());
    build_hasse(&corpus.catalog, kind, &edges).unwrap()
}

fn labels(g: &HasseGraph, names: &[String]) -> BTreeSet<String> {
    names.iter().map(|n| g.node(n).unwrap().label.clone()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn maximal_nodes_per_type() {
    let corpus = Corpus::embedded().unwrap();
    for (kind, expected) in [
        ((1, 4), set(&["3", "6", "7", "9"])),
        ((3, 2), set(&["18", "19", "23", "25", "27", "29"])),
        ((2, 3), set(&["15", "33", "41", "31^lambda", "44^phi"])),
    ] {
        let g = graph(&corpus, kind);
        assert_eq!(labels(&g, &g.maximal_nodes), expected, "{kind:?}");
    }
}

#[test]
fn maximal_nodes_are_pairwise_separated() {
    let corpus = Corpus::embedded().unwrap();
    for kind in [(1, 4), (3, 2), (2, 3)] {
        let g = graph(&corpus, kind);
        let profiles = profiles_for(&corpus.catalog, kind, &default_identities(), Exec::default()).unwrap();
        let (comps, seps) = components(&g, &profiles).unwrap();
        let k = comps.len();
        assert_eq!(seps.len(), k * (k - 1));
    }
}

#[test]
fn reduction_keeps_reachability() {
    let corpus = Corpus::embedded().unwrap();
    for kind in [(1, 4), (3, 2), (2, 3)] {
        let g = graph(&corpus, kind);
        assert_eq!(g.reduced_reachability(), g.reachability(), "{kind:?}");
        assert!(g.reduced_edges.len() <= g.edges.len() + g.nodes.len());
    }
}

#[test]
fn every_node_reaches_the_trivial_one() {
    let corpus = Corpus::embedded().unwrap();
    for kind in [(1, 4), (3, 2), (2, 3), (4, 1)] {
        let g = if kind == (4, 1) {
            type41_diagram(&corpus.catalog, &corpus.type41_edges, &corpus.certificates_of_kind(kind)).unwrap()
        } else {
            graph(&corpus, kind)
        };
        let t = g.trivial().to_string();
        for n in &g.nodes {
            assert!(n.name == t || g.reaches(&n.name, &t), "{} in {kind:?}", n.name);
        }
    }
}

#[test]
fn type41_diagram_from_the_even_parts() {
    let corpus = Corpus::embedded().unwrap();
    let g = type41_diagram(&corpus.catalog, &corpus.type41_edges, &corpus.certificates_of_kind((4, 1))).unwrap();
    assert_eq!(labels(&g, &g.maximal_nodes), set(&["10", "11"]));
    let count = |s: EdgeStatus| g.edges.iter().filter(|e| e.status == s).count();
    assert_eq!(count(EdgeStatus::Verified), 11);
    assert_eq!(count(EdgeStatus::Imported), 4);
}
