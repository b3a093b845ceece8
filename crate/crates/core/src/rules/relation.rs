//! Relation pre-alignment by convention and by token matching.

use std::collections::BTreeSet;

use crate::amr::{AmrGraph, EdgeId, Role};
use crate::corpus::Instance;
use crate::state::{AlignmentState, Provenance};

/// Which endpoint's span a role is aligned to by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Parent,
    Child,
}

/// Conventional side for a role, if the role has one.
pub fn conventional_side(role: &Role) -> Option<(Side, &'static str)> {
    let r = role.as_str();
    if role.is_core() {
        Some((Side::Parent, "arg-parent"))
    } else if role.is_core_inverse() {
        Some((Side::Child, "arg-of-child"))
    } else if role.is_op() {
        Some((Side::Parent, "op-parent"))
    } else if role.is_snt() {
        Some((Side::Parent, "snt-parent"))
    } else if r == ":domain" {
        Some((Side::Parent, "domain-parent"))
    } else if matches!(r, ":name" | ":polarity" | ":li") {
        Some((Side::Child, "child-convention"))
    } else {
        None
    }
}

/// Aligns relations fixed by convention or by an unambiguous token.
pub fn prealign_relations(state: &mut AlignmentState, inst: &Instance) {
    let amr = &inst.amr;
    for e in amr.edge_ids() {
        if state.is_internal(amr, e) || state.relation_span(e).is_some() {
            continue;
        }
        let edge = amr.edge(e);
        if let Some((side, rule)) = conventional_side(&edge.role) {
            let node = match side {
                Side::Parent => edge.parent,
                Side::Child => edge.child,
            };
            if let Some(span) = state.node_span(node) {
                state.add_relation(span, e, Provenance::Rule(rule));
            }
        }
    }
    token_roles(state, inst);
    possessives(state, inst);
}

fn free_edges<'a>(state: &'a AlignmentState, amr: &'a AmrGraph) -> impl Iterator<Item = EdgeId> + 'a {
    amr.edge_ids()
        .filter(move |&e| !state.is_internal(amr, e) && state.relation_span(e).is_none())
}

/// `:prep-X` and `:conj-X` go to the unique span reading X.
fn token_roles(state: &mut AlignmentState, inst: &Instance) {
    let amr = &inst.amr;
    let edges: Vec<EdgeId> = free_edges(state, amr).collect();
    let word_of = |e: EdgeId| -> Option<String> {
        let base = amr.edge(e).role.as_str();
        base.strip_prefix(":prep-")
            .or_else(|| base.strip_prefix(":conj-"))
            .map(str::to_lowercase)
    };
    let keys: BTreeSet<String> = edges.iter().filter_map(|&e| word_of(e)).collect();
    for key in keys {
        let with_key: Vec<EdgeId> = edges
            .iter()
            .copied()
            .filter(|&e| word_of(e).as_deref() == Some(&key))
            .collect();
        let spans: Vec<usize> = (0..inst.span_count())
            .filter(|&s| {
                let surface = inst.sentence.tokens[inst.spans[s].tokens()]
                    .iter()
                    .map(|t| t.to_lowercase())
                    .collect::<Vec<_>>()
                    .join("-");
                surface == key
            })
            .collect();
        if let ([e], [s]) = (&with_key[..], &spans[..]) {
            state.add_relation(*s, *e, Provenance::Rule("token-match"));
        }
    }
}

/// A unique `:poss` or `:part` goes to a unique `'s` or `of`.
fn possessives(state: &mut AlignmentState, inst: &Instance) {
    let amr = &inst.amr;
    let edges: Vec<EdgeId> = free_edges(state, amr)
        .filter(|&e| matches!(amr.edge(e).role.base(), ":poss" | ":part"))
        .collect();
    let [e] = edges[..] else { return };
    let spans: Vec<usize> = (0..inst.span_count())
        .filter(|&s| {
            let text = inst.span_text(s).to_lowercase();
            (text == "'s" || text == "of" || text == "’s") && !state.span_is_aligned(s)
        })
        .collect();
    if let [s] = spans[..] {
        state.add_relation(s, e, Provenance::Rule("possessive"));
    }
}
