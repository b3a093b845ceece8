//! Greedy decoding of the subgraph and duplicate layers.

use std::collections::BTreeSet;

use crate::amr::NodeId;
use crate::model::Scorer;
use crate::state::{AlignmentState, Provenance};

/// Where a candidate puts a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    /// Extend the span's subgraph at this index.
    Extend(usize),
    /// Start a new subgraph on the span.
    New,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgraphCandidate {
    pub node: NodeId,
    pub span: usize,
    pub slot: Slot,
}

/// One committed decoder step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgraphStep {
    pub candidate: SubgraphCandidate,
    pub delta: f64,
}

/// Legal placements for an unaligned node, sorted by span then slot.
pub fn legal_candidates_subgraph(scorer: &Scorer<'_>, state: &AlignmentState, node: NodeId) -> Vec<SubgraphCandidate> {
    let amr = &scorer.inst.amr;
    let mut out: BTreeSet<(usize, Slot)> = BTreeSet::new();
    // unaligned spans
    for span in 0..state.span_count() {
        if !state.span_is_aligned(span) {
            out.insert((span, Slot::New));
        }
    }
    // spans aligned to a neighbour whose subgraph stays legal when extended;
    // rule alignments are final
    let mut neighbor_spans = BTreeSet::new();
    for m in amr.adjacent(node) {
        let Some((span, index)) = state.node_location(m) else {
            continue;
        };
        neighbor_spans.insert(span);
        let sub = &state.subgraphs_at(span)[index];
        if sub.closed || matches!(sub.provenance, Provenance::Rule(_)) {
            continue;
        }
        let mut grown = sub.nodes.clone();
        grown.insert(node);
        if amr.is_legal_subgraph(&grown) {
            out.insert((span, Slot::Extend(index)));
        }
    }
    // duplicates of an already aligned concept
    let label = amr.label(node);
    for m in amr.node_ids() {
        if m != node && amr.label(m) == label {
            if let Some(span) = state.node_span(m) {
                out.insert((span, Slot::New));
            }
        }
    }
    if out.is_empty() {
        if neighbor_spans.is_empty() {
            out.extend((0..state.span_count()).map(|s| (s, Slot::New)));
        } else {
            out.extend(neighbor_spans.into_iter().map(|s| (s, Slot::New)));
        }
    }
    out.into_iter()
        .map(|(span, slot)| SubgraphCandidate { node, span, slot })
        .collect()
}

/// Spans whose score changes when `node` is placed on `span`.
fn affected_spans(scorer: &Scorer<'_>, state: &AlignmentState, node: NodeId, span: usize) -> BTreeSet<usize> {
    let mut spans = BTreeSet::from([span]);
    spans.extend(scorer.inst.amr.adjacent(node).filter_map(|m| state.node_span(m)));
    spans
}

/// Exact change in the layer score from committing a candidate.
pub fn candidate_delta(scorer: &Scorer<'_>, state: &mut AlignmentState, cand: SubgraphCandidate) -> f64 {
    let spans = affected_spans(scorer, state, cand.node, cand.span);
    let before: f64 = spans.iter().map(|&s| scorer.score_span_subgraphs(state, s)).sum();
    let ins = apply(state, cand);
    let after: f64 = spans.iter().map(|&s| scorer.score_span_subgraphs(state, s)).sum();
    state.revert(ins);
    after - before
}

fn apply(state: &mut AlignmentState, cand: SubgraphCandidate) -> crate::state::Insertion {
    let index = match cand.slot {
        Slot::Extend(i) => Some(i),
        Slot::New => None,
    };
    state.insert_node(cand.node, cand.span, index, Provenance::Statistical)
}

/// Aligns every remaining node, one best-scoring candidate at a time.
pub fn align_subgraphs(scorer: &Scorer<'_>, state: &mut AlignmentState) -> Vec<SubgraphStep> {
    let mut trace = Vec::new();
    loop {
        let nodes: Vec<NodeId> = state.unaligned_nodes().collect();
        if nodes.is_empty() {
            break;
        }
        let mut best: Option<SubgraphStep> = None;
        for node in nodes {
            for cand in legal_candidates_subgraph(scorer, state, node) {
                let delta = candidate_delta(scorer, state, cand);
                if best.is_none_or(|b| delta > b.delta) {
                    best = Some(SubgraphStep { candidate: cand, delta });
                }
            }
        }
        let step = best.expect("every unaligned node has a candidate");
        apply(state, step.candidate);
        trace.push(step);
    }
    trace
}
