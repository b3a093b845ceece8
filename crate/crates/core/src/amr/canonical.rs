//! Variable-name-insensitive graph fingerprints.
//!
//! Node colours start from (label, constant?, root?) and are refined
//! Weisfeiler-Lehman style over normalized edges until the partition stops
//! splitting. Two graphs are treated as isomorphic when their sorted colour
//! and edge multisets agree.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use super::graph::AmrGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    nodes: Vec<u64>,
    edges: Vec<(u64, String, u64)>,
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

pub fn canonical_form(graph: &AmrGraph) -> CanonicalForm {
    let edges: Vec<(usize, String, usize)> = graph
        .edges()
        .iter()
        .map(|e| {
            let (p, role, c) = e.normalized();
            (p.index(), role.to_string(), c.index())
        })
        .collect();
    let mut colours: Vec<u64> = graph
        .node_ids()
        .map(|n| {
            let node = graph.node(n);
            hash_of(&(node.label(), node.is_constant(), n == graph.root()))
        })
        .collect();
    let distinct = |c: &[u64]| c.iter().collect::<HashSet<_>>().len();
    let mut classes = distinct(&colours);
    for _ in 0..graph.node_count() {
        let mut signatures: Vec<Vec<(bool, &str, u64)>> = vec![Vec::new(); colours.len()];
        for (p, role, c) in &edges {
            signatures[*p].push((true, role, colours[*c]));
            signatures[*c].push((false, role, colours[*p]));
        }
        let next: Vec<u64> = signatures
            .iter_mut()
            .zip(&colours)
            .map(|(sig, &old)| {
                sig.sort_unstable();
                hash_of(&(old, &*sig))
            })
            .collect();
        colours = next;
        let now = distinct(&colours);
        if now == classes {
            break;
        }
        classes = now;
    }
    let mut nodes = colours.clone();
    nodes.sort_unstable();
    let mut edges: Vec<(u64, String, u64)> = edges
        .into_iter()
        .map(|(p, role, c)| (colours[p], role, colours[c]))
        .collect();
    edges.sort_unstable();
    CanonicalForm { nodes, edges }
}

pub fn is_isomorphic(a: &AmrGraph, b: &AmrGraph) -> bool {
    a.node_count() == b.node_count() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}
