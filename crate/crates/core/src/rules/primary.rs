//! Choosing the primary incoming edge of each reentrant node.

use crate::amr::{EdgeId, NodeId};
use crate::corpus::Instance;
use crate::state::AlignmentState;

/// Marks one primary edge per reentrant node. Returns the nodes whose choice
/// had to fall back to depth-first order because no parent was aligned.
pub fn identify_primary_edges(state: &mut AlignmentState, inst: &Instance) -> Vec<NodeId> {
    let amr = &inst.amr;
    let mut flagged = Vec::new();
    for (node, incoming) in amr.reentrant_nodes() {
        let own = state.node_span(node);
        let in_own_span = incoming
            .iter()
            .copied()
            .find(|&e| own.is_some() && state.edge_alignment_span(amr, e) == own);
        let chosen = in_own_span.or_else(|| closest_edge(state, inst, node, &incoming));
        let edge = match chosen {
            Some(e) => e,
            None => {
                flagged.push(node);
                first_in_dfs_order(&incoming)
            }
        };
        state.set_primary(node, edge);
    }
    flagged
}

/// Shortest parent-to-child span distance, then leftmost parent span.
fn closest_edge(state: &AlignmentState, inst: &Instance, node: NodeId, incoming: &[EdgeId]) -> Option<EdgeId> {
    let amr = &inst.amr;
    let child_span = state.node_span(node)? as i64;
    incoming
        .iter()
        .filter_map(|&e| {
            let p = state.node_span(amr.edge(e).parent)? as i64;
            Some(((p - child_span).abs(), p, e))
        })
        .min()
        .map(|(_, _, e)| e)
}

fn first_in_dfs_order(incoming: &[EdgeId]) -> EdgeId {
    incoming
        .iter()
        .copied()
        .min()
        .expect("reentrant node has incoming edges")
}
